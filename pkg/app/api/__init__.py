"""SlidingK - API routes package."""

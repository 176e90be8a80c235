"""SlidingK - Test package."""

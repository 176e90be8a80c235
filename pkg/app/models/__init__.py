"""SlidingK - Data models package."""

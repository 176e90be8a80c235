"""SlidingK - Utility functions package."""

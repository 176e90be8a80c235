"""SlidingK - Main application package."""

"""SlidingK - Sketches, solvers and experiment services package."""

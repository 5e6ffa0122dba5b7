"""nlslab: a pseudospectral laboratory for the damped driven nonlinear
Schroedinger equation, feedback nudging, the W-map and its determining form."""

__version__ = "0.1.0"

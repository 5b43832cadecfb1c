"""Spatially regularized active learning by nonlinear diffusion for image cubes."""
__version__ = '1.0.0'

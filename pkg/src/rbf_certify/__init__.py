"""rbf-certify - explicit error bounds for Gaussian RBF interpolation."""

__version__ = "0.1.0"

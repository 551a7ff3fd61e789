"""Semi-classical orthogonal polynomials on the unit circle."""

"""Exact algebra over Q(i): coefficients, polynomials in z and zbar, rational functions."""

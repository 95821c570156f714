"""Core numerics: alignment, Poisson solve, sampling, geometry, metrics and IO."""

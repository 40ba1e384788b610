"""
Domain layer - models, numerical services and exceptions.

This layer contains:
- Domain models (datasets, networks, fits, reports, results)
- Domain services (colorizing, training, regression, adjustment, diagnostics)
- Domain exceptions

Services are pure given their seeds; only logging reaches outside the layer.
"""

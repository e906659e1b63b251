"""Bayesian spatial voting: Euclidean and circular ideal-point models."""

try:
    from spatialvote._core import (
        align_and_project,
        circular_correlation,
        ensemble_regression,
        fit_circular,
        fit_euclidean,
        geodesic_distance,
        link_cdf,
        link_density,
        pearson_correlation,
        simulate,
    )
except ImportError:  # in-tree test runs put the extension on sys.path directly
    from _core import (
        align_and_project,
        circular_correlation,
        ensemble_regression,
        fit_circular,
        fit_euclidean,
        geodesic_distance,
        link_cdf,
        link_density,
        pearson_correlation,
        simulate,
    )

__all__ = [
    "align_and_project",
    "circular_correlation",
    "ensemble_regression",
    "fit_circular",
    "fit_euclidean",
    "geodesic_distance",
    "link_cdf",
    "link_density",
    "pearson_correlation",
    "simulate",
]

"""qhlab: numerical experiments on quasihyperbolic geometry of planar domains.

Builds weighted-grid discretizations of bounded domains, computes inner and
quasihyperbolic distances and geodesics, estimates Gromov hyperbolicity,
tests boundary-pair visibility, fits growth envelopes, and runs
boundary-extension and compactness experiments.
"""

__version__ = "0.1.0"

from ._kernel import backend_name, compiled_available as _fastpaths_available
from .curves import (ParametrizedCurve, d_length, parametrized_curve,
                     qh_length, qh_parametrize)
from .domains import (BoundaryPoint, Comb, Disk, DomainSpec,
                      PolygonWithHoles, Rectangle, make_comb_domain)
from .extension import (CompactnessReport, ExtensionExperiment,
                        compactness_check, injectivity_line_check,
                        run_extension_experiment)
from .graph import MetricGraph, build_graph
from .hyperbolicity import (HyperbolicityReport, RayApprox, build_ray,
                            estimate_delta, landing_point, rays_equivalent,
                            thin_triangle_delta)
from .paths import (LowerBoundReport, check_lower_bounds, inner_distance,
                    qh_distance, qh_geodesic)
from .regularity import (GrowthModel, RegularityReport, fit_growth_function,
                         gehring_hayman_constant, growth_envelope,
                         integral_test, phi_uniform_transform,
                         quasiconvexity_constant, summation_test)
from .visibility import (VisibilityReport, falsify_visibility,
                         observation_divergence_check, test_pair_visibility)

__all__ = [
    "__version__", "backend_name",
    "BoundaryPoint", "Comb", "Disk", "DomainSpec", "PolygonWithHoles",
    "Rectangle", "make_comb_domain",
    "MetricGraph", "build_graph",
    "ParametrizedCurve", "d_length", "parametrized_curve", "qh_length",
    "qh_parametrize",
    "LowerBoundReport", "check_lower_bounds", "inner_distance", "qh_distance",
    "qh_geodesic",
    "HyperbolicityReport", "RayApprox", "build_ray", "estimate_delta",
    "landing_point", "rays_equivalent", "thin_triangle_delta",
    "VisibilityReport", "falsify_visibility", "observation_divergence_check",
    "test_pair_visibility",
    "GrowthModel", "RegularityReport", "fit_growth_function",
    "gehring_hayman_constant", "growth_envelope", "integral_test",
    "phi_uniform_transform", "quasiconvexity_constant", "summation_test",
    "CompactnessReport", "ExtensionExperiment", "compactness_check",
    "injectivity_line_check", "run_extension_experiment",
]

"""confrad: extremal products of conformal radii over non-overlapping planar domains.

The package evaluates the functional

    J(gamma) = [r(B0, 0) * r(Binf, inf)]^gamma * prod_k r(Bk, ak)

on systems of disjoint planar domains, reproduces the critical constants of
the majorant functions Phi and Psi that bound it, searches for the largest
exponent gamma for which the symmetric two-point configuration dominates,
traces the trajectory structure of the associated quadratic differential,
and estimates inner radii of arbitrary polyline-bounded domains by
walk-on-spheres Monte Carlo.
"""

__version__ = "0.1.0"

from .bound import (  # noqa: F401
    PoleSystem,
    ThresholdReport,
    chain_bound,
    evaluate_K,
    excess,
    gamma_threshold,
    symmetric_value,
)
from .critpoints import (  # noqa: F401
    BracketedRoot,
    bracketed_root,
    build_psi_profile,
    locate_curvature_zero,
    locate_psi_max,
)
from .geometry import (  # noqa: F401
    Configuration,
    Disk,
    ExteriorDisk,
    HalfPlane,
    RaySystem,
    SeparatedSystem,
    check_separation_bounds,
    config_from_json,
    config_to_json,
    evaluate_J,
    inner_radius_analytic,
    sample_configuration,
    separating_map,
    transform_boundary,
)
from .quaddiff import (  # noqa: F401
    TrajectoryField,
    critical_graph,
    extremal_product_estimate,
    q_eval,
    q_zeros,
    render_svg,
    trace_trajectory,
)
from .specfun import (  # noqa: F401
    PsiProfile,
    d2log_psi,
    dlog_psi,
    log_psi,
    phi,
    psi,
)
from .wos import (  # noqa: F401
    McEstimate,
    estimate_inner_radius,
    estimate_inner_radius_at_infinity,
    oracle_for,
    wos_exit,
)

"""Numerical frame geometry in the non-flat 3D space forms S^3_q(1) and H^3_q(-1).

The library computes Frenet frames of non-null curves sitting on the quadrics
S^3_q(1) and H^3_q(-1) inside the pseudo-Euclidean space R^4_v, extends the
frame calculus to 3-parameter congruences gamma(s, xi, eta), evaluates the
divergence-type Maxwell residuals of frame-aligned electromagnetic fields,
and integrates the bending energies of the frame fields along each
parameter direction.
"""

from .pseudo_metric import (
    CausalCharacter,
    causal_character,
    inner,
    norm,
)
from .space_form import SpaceForm, contains, principal_normal_geodesic, signature_for
from .frenet import (
    CurveSpec,
    FrenetSample,
    FrameDegenerate,
    NonNullViolation,
    frenet_frame,
    frenet_residuals,
    parallel_transport,
)
from .congruence import (
    CongruenceGrid,
    FrameCoefficients,
    abnormalities,
    build_grid,
    chiral_generator,
    compatibility_residuals,
    const_congruence,
    curl,
    divergence,
    eta_coefficients,
    extended_frenet_matrices,
    gradient,
    rotation_congruence,
    rotation_generator,
    xi_coefficients,
)
from .electromagnetic import (
    CurlResult,
    DivisionDegenerate,
    ElectromagneticState,
    MaxwellContext,
    curvature_from_electric,
    curvature_from_magnetic,
    electric_derivative,
    electric_divergence,
    frame_cross,
    lorentz_matrix,
    magnetic_curl,
    magnetic_divergence,
    magnetic_vector,
    maxwell_residuals,
    synthesize_maxwell_state,
)
from .energy import (
    EnergyReport,
    QuadratureConfig,
    energy_eta,
    energy_report,
    energy_s,
    energy_xi,
    simpson,
)
__version__ = "0.1.0"

__all__ = [
    "CausalCharacter",
    "causal_character",
    "inner",
    "norm",
    "SpaceForm",
    "contains",
    "principal_normal_geodesic",
    "signature_for",
    "CurveSpec",
    "FrenetSample",
    "FrameDegenerate",
    "NonNullViolation",
    "frenet_frame",
    "frenet_residuals",
    "parallel_transport",
    "CongruenceGrid",
    "FrameCoefficients",
    "abnormalities",
    "build_grid",
    "chiral_generator",
    "compatibility_residuals",
    "const_congruence",
    "curl",
    "divergence",
    "eta_coefficients",
    "extended_frenet_matrices",
    "gradient",
    "rotation_congruence",
    "rotation_generator",
    "xi_coefficients",
    "CurlResult",
    "DivisionDegenerate",
    "ElectromagneticState",
    "MaxwellContext",
    "curvature_from_electric",
    "curvature_from_magnetic",
    "electric_derivative",
    "electric_divergence",
    "frame_cross",
    "lorentz_matrix",
    "magnetic_curl",
    "magnetic_divergence",
    "magnetic_vector",
    "maxwell_residuals",
    "synthesize_maxwell_state",
    "EnergyReport",
    "QuadratureConfig",
    "energy_eta",
    "energy_report",
    "energy_s",
    "energy_xi",
    "simpson",
    "__version__",
]

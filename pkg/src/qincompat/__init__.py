"""Joint measurability of binary qubit measurements and incompatibility probabilities."""

from .criterion import CompatVerdict, busch_g, check_compatible, criterion_h, region_membership, unbiased_f
from .errors import CompletenessError, DomainError, ShapeError, ValidityError
from .estimate import (
    EstimateResult,
    ProbabilityGrid,
    expectation_f,
    expectation_f_incompatible,
    expectation_fg_mc,
    expectation_g,
    expectation_g_incompatible,
    prob_grid,
    prob_lambda_section,
    prob_mc,
    prob_unbiased_quadrature,
    vol_njm_mc,
    vol_section,
    vol_theta,
    vol_unbiased_lebesgue,
    vol_V,
)
from .joint import (
    ConstraintSlack,
    NoiseTensor,
    QubitNoiseParam,
    build_G_mixture,
    build_M_joint,
    build_T_product,
    construct_unbiased_witness,
    feasibility_oracle,
    marginal,
    qubit_constraints,
    qubit_noise_tensor,
)
from .kernels import backend_name, set_threads
from .operators import (
    BlochPovm,
    HermitianOp,
    PovmTensor,
    ProbabilityVector,
    ValidationReport,
    bloch_from_effects,
    effect_from_bloch,
    validate_povm,
)
from .rng import RngStream
from .sampling import (
    MeasureSpec,
    cdf_inner_product,
    density_inner_product,
    norm_constant,
    sample_pair,
    sample_pairs,
    sample_sharpness,
    sample_sharpnesses,
    sample_unit_sphere,
    sample_unit_spheres,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

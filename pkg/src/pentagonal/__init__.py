"""Sharp weighted cosine-sum inequalities on the angle simplex (n = 5, 7)."""
from .arrangements import (
    CyclicArrangement,
    IdentityResidual,
    enumerate_arrangements,
    lemma1_residuals,
    min_phi_arrangement,
    min_psi_arrangement,
    sigma0,
)
from .bounds import (
    COS_PI_5,
    BoundReport,
    SubstitutionResult,
    TothRoundTrip,
    cosine_sum,
    heptagonal_rhs,
    heptagonal_substitution,
    lemma2_rhs,
    lemma2_substitution,
    odd_n_rhs_experimental,
    pentagonal_bound_check,
    pentagonal_rhs_normal,
    pentagonal_rhs_strong,
    toth_from_pentagonal,
    toth_rhs,
)
from .cyclic_forms import cyclic_window_sum, phi, psi
from .errors import ConvergenceError, InvalidArgumentError
from .sharpness import (
    SharpnessReport,
    StationaryPoint,
    max_cosine_sum,
    monte_carlo_verify,
    solve_stationary,
)

__version__ = "0.1.0"

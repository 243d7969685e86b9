"""Growth rates of weighted shift operator pairs, d-bar distances and the
constructions built on them."""
from .cocycle import Bounds, log_norm, periodic_log_spectral_radius, shift_sums, window_sum
from .dbar import CouplingLP, dbar_lp_lower, dbar_periodic_exact, dbar_upper_product, matching_distance
from .jsr import jsr_lower, jsr_upper
from .lyapunov import lyapunov_envelope_upper, lyapunov_mc, lyapunov_periodic_exact, lyapunov_upper
from .measures import (
    Bernoulli,
    Empirical,
    Markov,
    PeriodicMeasure,
    SturmianMeasure,
    cylinder_prob,
    sample_word,
)
from .perturb import check_growth, check_upper_inequality
from .symbolic import (
    BiSequence,
    BlockRecursive,
    Complemented,
    FactorSet,
    OrbitClosureApprox,
    Periodic,
    PeriodicOrbit,
    Shifted,
    Sturmian,
    Word,
    block_sequence,
    mismatch_density,
    window,
)
from .weights import (
    Combo,
    OrbitInduced,
    PerturbationPlan,
    Psi,
    Tabular,
    build_plan,
    eval_weight,
    psi_ell,
)

__version__ = "0.1.0"

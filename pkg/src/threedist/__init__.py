"""Best Diophantine approximations and nearest-distance counts of Kronecker sequences."""

from .arith import (
    DistanceValue,
    HorizonError,
    Norm,
    Orbit,
    RationalVector,
    TorusPoint,
    compare_distance,
    torus_dist,
    torus_reduce,
)
from .bestapprox import (
    BestApproxSequence,
    InequalityReport,
    compute_best_approximations,
    contact_number,
    doubling_index,
    halving_check,
    orbit_distance,
    ratio_floor_check,
    verify_sum_inequality,
)
from .gaps import (
    CountSeries,
    GapSpectrum,
    chevallier_count,
    count_distinct,
    gap_spectrum,
    nearest_distance,
    nearest_distance_fast,
    window_stats,
)
from .onedim import (
    CFDescription,
    ConvergentTable,
    cf_convergents,
    cf_expand,
    classify_liminf,
    classify_limsup,
    golden_equivalent,
)
from .search import SamplingReport, Witness, sample_doubling_violations, search_high_g

__version__ = "0.1.0"

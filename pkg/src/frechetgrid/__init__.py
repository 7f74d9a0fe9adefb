"""Grid-hash indexes for polygonal curves under the Fréchet distance."""

from .anns_asym import REJECTED, AsymIndex, QueryOutcome, build_asym_index, query_asym
from .anns_sym import SymIndex, build_sym_index, query_sym
from .asrs import AsrsIndex, SubcurveRange, build_asrs_index, extract_inclusion_minimal, query_asrs
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyInput,
    FormatError,
    FrechetGridError,
    InvalidParameter,
    InvalidQuery,
    OutOfBounds,
    QuerySizeMismatch,
)
from .geometry import (
    Curve,
    approx_diameter,
    continuous_frechet_decide,
    discrete_frechet,
    simplify_mu,
)
from .grid import Grid, OpCounter, build_grid, path_key, round_to_lattice
from .serialize import dumps, load, loads, save
from .twd import StampedPoint, TwdIndex, build_twd, query_twd

__version__ = "0.1.0"

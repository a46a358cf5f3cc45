"""Equilibria of the entangled (quantum) Cournot duopoly with quartic costs."""

from .bifurcation import (
    InvalidRange,
    PatternNotFound,
    SweepRecord,
    Thresholds,
    find_thresholds,
    profit_branches,
    sweep,
)
from .equilibria import (
    Equilibrium,
    ParetoOptimum,
    SolverFailure,
    SymmetricInput,
    SymmetricSolution,
    asymmetry_bound,
    asymmetry_identity,
    best_response,
    br_conjugate,
    enumerate_equilibria,
    equilibrium_polynomial,
    pareto_optimum,
    strategy_foc,
    symmetric_closed_form,
)
from .model import (
    GAMMA_MAX,
    EntangledGame,
    InvalidParameter,
    ModelParams,
    ProfitPair,
    QuantityPair,
    StrategyPair,
    cost,
    inverse_demand,
    profit_classical,
    profit_quantum,
    quantity_map,
    quantity_map_inverse,
)
from .oracle import GridSpec, InvalidGrid, grid_equilibria
from .realroots import Polynomial, RootSet, real_roots, real_roots_cubic, sturm_count

__version__ = "0.1.0"

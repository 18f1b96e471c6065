"""Fractional Hermite-Hadamard, Simpson and Ostrowski type inequalities,
checked numerically against independent oracles."""

from .bounds import CorollaryId, Family, verify
from .coeffs import a1, a2_m, a2_s, a3_m, a3_s, oracle_moment
from .convexity import FunctionSpec, Membership, catalog, catalog_by_name
from .expr import parse
from .fracint import left_rl, paper_pair, right_rl
from .harness import SweepConfig, load_config, run
from .quadrature import QuadratureConfig
from .sfunc import InequalityParams, sf_direct, sf_identity_rhs
from .specfun import SpecFunConfig, beta, gamma, incomplete_beta

__version__ = "0.1.0"

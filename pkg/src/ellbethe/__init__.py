"""Elliptic algebraic Bethe ansatz and the holonomic difference system it solves.

The layers build on each other: theta functions, the Sklyanin algebra and
its L operators, vertex-IRF intertwiners, paths and Bethe vector spaces,
monodromy matrices and Bethe vectors, and finally the operators ``A_j`` with
the lattice-sum solution of ``f(..., z_j + kappa, ...) = A_j(z) f(z)``.
"""

from .bethe import (
    BetheBasis,
    BetheElement,
    ChainConfig,
    PathVector,
    boundary_z,
    enumerate_basis,
    path_vector_coords,
    r_check,
    weight_zero_count,
)
from .errors import (
    DegenerateBasisError,
    DomainError,
    EllBetheError,
    ExpansionError,
    LabelMismatchError,
    LatticeError,
    PoleError,
    SingularGaugeError,
    WitnessError,
)
from .holonomic import (
    Cycle,
    a_j,
    build_cycle,
    f_l,
    holonomy_check,
    phi_pair,
    solve,
    varphi_weight,
    verify_system,
)
from .intertwiner import (
    GaugeMatrix,
    IntertwinerVector,
    IrfWeight,
    Level,
    TwistedL,
    gauge_matrix,
    irf_weight,
    local_pseudo_vacuum,
    phi_eval,
    twisted_l,
)
from .monodromy import (
    Monodromy,
    ScalarWeights,
    TwistedMonodromy,
    bethe_psi,
    global_pseudo_vacuum,
    monodromy,
    scalar_weights,
    twisted_monodromy,
)
from .operators import BetheLabel, OperatorMatrix, TensorLabel
from .reports import ResidualReport, ResidualRow
from .sklyanin import BaxterR, LOperator, SklyaninRep, Spin, baxter_r, l_operator, r_half_l, spin_rep
from .theta import ModularParams, ThetaChar, pochhammer, pochhammer_double, precision, theta
from .weights import WeightFunctions, weight_functions

theta_eval = theta

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

"""Two identical two-level atoms in two parametrically coupled Kerr cavity modes.

Closed-form block amplitudes, an RK4 reference integrator, and the reduced
entropy, I-concurrence and negativity of the two atoms.
"""
from .amplitudes import BlockSolution, amplitudes_at, solve_block
from .config import RunConfig, parse_config
from .cubic import CubicCoefficients, CubicRoots, min_root_separation, solve_cubic_trig
from .dynamics import MeasureSeries, simulate
from .estimator import EntanglementDynamics
from .exceptions import (ConfigError, NonIdenticalAtoms, NumericalError,
                         ParameterError)
from .measures import (MeasureSample, concurrence, entropy_cardano,
                       entropy_eigen, negativity)
from .model import (BlockCoefficients, ModelParams, RotatedFrame,
                    block_coefficients, rotated_frame, rotation_angle)
from .oracle import integrate_block, validate
from .state import (BlockEnsemble, JointState, assemble_state,
                    atom_density_matrix, atom_gram_eigenvalues)

__version__ = "0.1.0"

__all__ = [
    "BlockCoefficients", "BlockEnsemble", "BlockSolution", "ConfigError",
    "CubicCoefficients", "CubicRoots", "EntanglementDynamics", "JointState",
    "MeasureSample", "MeasureSeries", "ModelParams", "NonIdenticalAtoms",
    "NumericalError", "ParameterError", "RotatedFrame", "RunConfig",
    "amplitudes_at", "assemble_state", "atom_density_matrix",
    "atom_gram_eigenvalues", "block_coefficients", "concurrence",
    "entropy_cardano", "entropy_eigen", "integrate_block", "min_root_separation",
    "negativity", "parse_config", "rotated_frame", "rotation_angle", "simulate",
    "solve_block", "solve_cubic_trig", "validate",
]

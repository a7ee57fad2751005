"""Interface jump relations for 2D anisotropic elliptic interface problems.

Closed-form relations expressing the plus-side solution state at an
interface point through the minus-side state and the prescribed jumps,
cross-validated against a primitive-identity linear-system solve,
verified end to end with manufactured solutions, and demonstrated as
correction terms in an immersed-interface finite-difference solver.
"""

from .errors import (AnisoJumpError, CapabilityError, CoefficientError,
                     ConfigError, DegenerateFrameError, GeometryError,
                     GraphDomainError, GridError, SolverError)
from .geometry import (Circle, Ellipse, InterfaceCurve, LocalFrame,
                       ParametricCurve, build_local_frame, chi_probe,
                       graph_parameter, local_to_world, normal_tangent_at,
                       world_to_local)
from .jumps import (TYPO_LEDGER, JumpData, PrimitiveSystem, SideState,
                    assemble_primitive_system, flux_jump_eval,
                    plus_state_closed_form_constant,
                    plus_state_closed_form_variable, plus_state_oracle,
                    primitive_residuals)
from .manufactured import (CASE_NAMES, AnalyticField, ManufacturedCase,
                           flip_sides, get_case, jump_data_at, side_state_at,
                           verify_theorem_at)
from .solver import (CorrectionTerm, DiscreteSystem, GridSpec,
                     convergence_study, correction_at, discretize, solve,
                     solve_case)
from .tensors import (AnisoTensor, LocalTensor, local_c_coefficients,
                      localize, rotate_to_local)

__version__ = "0.1.0"

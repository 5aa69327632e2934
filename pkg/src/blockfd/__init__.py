"""Error-inhibiting two-point-block finite differences for the 1-D heat
equation, with a spectral-analysis and convergence-verification harness."""

from ._stencils import FOURTH_BLOCK, SECOND_BLOCK
from .convergence import (ConvergenceReport, SymbolTable, TruncationProfile,
                          error_norm, modal_error_decomposition,
                          n6_symbol_table, observed_order, run_study,
                          symbol_table, truncation_vector)
from .grid import BlockGrid, ibvp_grid, periodic_grid
from .manufactured import (ManufacturedProblem, exp_cos_problem,
                           polynomial_problem, problem_by_name, project)
from .operators import (BoundaryData, DiscreteOperator, MissingTraceError,
                        SchemeSpec, build_dirichlet, build_neumann,
                        build_operator, build_periodic, evaluate_rhs)
from .symbols import (FrequencyPair, IbvpEigenpair, ModalBasis, SymbolRecord,
                      assemble_modal_basis, companion, discriminant,
                      eigvec_coefficients, error_model_coefficient,
                      expansion_residuals, ibvp_eigenpairs, interior_symbols,
                      mode_samples, split_relation_residual)
from .timestep import (IntegrationBlowupError, StepPolicy, integrate,
                       integrate_batch, rk4_order_check, rk4_step,
                       spectral_radius_factor)

__all__ = [
    "BlockGrid", "BoundaryData", "ConvergenceReport", "DiscreteOperator",
    "FOURTH_BLOCK", "FrequencyPair", "IbvpEigenpair",
    "IntegrationBlowupError", "ManufacturedProblem", "MissingTraceError",
    "ModalBasis", "SECOND_BLOCK", "SchemeSpec", "StepPolicy", "SymbolRecord",
    "SymbolTable", "TruncationProfile", "assemble_modal_basis", "companion",
    "build_dirichlet", "build_neumann", "build_operator", "build_periodic",
    "discriminant", "eigvec_coefficients", "error_model_coefficient",
    "error_norm", "evaluate_rhs", "exp_cos_problem", "expansion_residuals",
    "ibvp_eigenpairs", "ibvp_grid", "integrate", "integrate_batch",
    "interior_symbols", "mode_samples", "modal_error_decomposition",
    "n6_symbol_table", "observed_order", "periodic_grid",
    "polynomial_problem", "problem_by_name", "project", "rk4_order_check",
    "rk4_step", "run_study", "spectral_radius_factor",
    "split_relation_residual", "symbol_table", "truncation_vector",
]

__version__ = "0.1.0"

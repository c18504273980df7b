"""Generalized second Bargmann transforms for hyperbolic Landau levels on the disk."""

from .params import ModelParams, ParameterError, levels, make_params, max_level
from .specfun import (gauss2f1_terminating, jacobi, jacobi_deflated, kummer1f1_terminating,
                      laguerre, laguerre_table, log_factorial, log_gamma_ratio)
from .quadrature import (DiskRule, HalfLineRule, QuadratureError, disk_mass, disk_rule,
                         gauss_laguerre, integrate_disk, integrate_halfline, write_rule_csv)
from .eigenspace import (GridField, basis_table, big_phi, big_phi_alt, check_disk, kernel,
                         kernel_diag, log_rho, mercer_diag, phi, read_field_csv, rho,
                         sample_field, write_field_csv)
from .coherent import (ConvergenceError, RadialFunction, TruncationSpec, coherent_closed,
                       coherent_norm, coherent_series, combo_input, inner_halfline,
                       powerexp_input, psi_basis, psi_input, psi_table)
from .transform import (EigenResidualReport, IsometryReport, StencilError, TransformRequest,
                        adjoint_reconstruct, bargmann_transform, dbar_residual, eigen_residual,
                        isometry_check, second_bargmann, transform_callable, transform_values)

__version__ = "0.1.0"

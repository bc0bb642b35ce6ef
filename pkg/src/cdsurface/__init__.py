"""Christoffel-Darboux kernels for non-Hermitian matrix weights, their
scalar counterparts on genus-0 Riemann surfaces, and correlation kernels
of doubly periodic lozenge-tiling models."""

from .contour import (ContourQuadrature, circle_quadrature, default_n,
                      integrate, union_quadrature, unit_circle_quadrature)
from .errors import (BranchCutWarning, CDSurfaceError,
                     InconsistentParametersError, InvalidArgumentError,
                     NearContourWarning, PoleError, SingularSystemError,
                     SizeGuardError, UnsupportedFamilyError)
from .mops import (MatrixPolynomial, MOPSystem, assemble_Y, assemble_Yinv,
                   cd_kernel, cd_kernel_formula, cd_kernel_sum,
                   cd_kernel_table, compute_moments, kernel_from_Y,
                   mop_system, pairing, solve_mops)
from .sops import (ScalarOPSystem, scalar_cd_kernel, scalar_cd_kernel_formula,
                   scalar_cd_kernel_sum, scalar_kernel_from_Y,
                   solve_scalar_ops)
from .surface import (Genus0Chart, build_chart, check_reproducing_plane,
                      check_reproducing_surface,
                      check_reproducing_surface_dual, frak_R, r_lambda,
                      r_lambda_matrix)
from .tiling import (HexagonModel, KernelQuery, PathSystem, dk_evaluator,
                     dk_kernel, edge_weight, enumerate_path_systems,
                     lgv_partition_function, macmahon_count,
                     partition_function, point_probability,
                     simplified_kernel_2x1, simplified_kernel_2x2,
                     simplified_kernel_general, uniform_scalar_kernel)
from .weights import (CyclicUniform, Periodic2x1, Periodic2x2, ScalarMonomial,
                      SpectralData, TwoByTwoRootK, WeightFamily,
                      check_spectral, eval_transition, eval_weight,
                      family_from_json, spectral_data)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

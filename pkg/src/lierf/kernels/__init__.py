"""Numeric realization of the inner product and structure function on momentum grids."""

from .checks import (Classification, CommutatorResult, SymmetryResult, commutator_details,
                     commutator_residual, kernel_symmetry_check, spectrum_support_classify)
from .cotangent import (CotangentKernelSpec, cotangent_ip, cotangent_test_function,
                        cotangent_xi, make_cotangent_kernel, p_range_study)
from .em import NotAntisymmetricError, bivector, em_integrand
from .fields import (DegenerateKernelError, GimelField, IPBinding, KernelSpec,
                     UnboundGeneratorError, eval_ip, eval_ip_nested, eval_xi,
                     gimel_transform, nested_xi, pairing)
from .gram import NotHermitianError, PSDResult, gram_matrix, jacobi_eigenvalues, psd_check
from .grid import GridMismatchError, MomentumGrid, minkowski_dot, reflect, shift
from .io import KernelFileError, load_kernel, load_shipped, save_kernel
from .moments import fourth_moment_closed_form, moment, moment_polynomial

__all__ = [
    "Classification", "CommutatorResult", "CotangentKernelSpec", "DegenerateKernelError",
    "GimelField", "GridMismatchError", "IPBinding", "KernelFileError", "KernelSpec",
    "MomentumGrid", "NotAntisymmetricError", "NotHermitianError", "PSDResult",
    "SymmetryResult", "UnboundGeneratorError", "bivector", "commutator_details",
    "commutator_residual", "cotangent_ip", "cotangent_test_function", "cotangent_xi",
    "em_integrand", "eval_ip", "eval_ip_nested", "eval_xi", "fourth_moment_closed_form",
    "gimel_transform", "gram_matrix", "jacobi_eigenvalues", "kernel_symmetry_check",
    "load_kernel", "load_shipped", "make_cotangent_kernel", "minkowski_dot", "moment",
    "moment_polynomial", "nested_xi", "p_range_study", "pairing", "psd_check", "reflect",
    "save_kernel", "shift", "spectrum_support_classify",
]

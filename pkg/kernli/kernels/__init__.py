"""
    Graph convolutional kernels.

    Every kernel except `firstorder` is a function of the renormalized Laplacian
    L = D^(-1/2) (A + I) D^(-1/2) and shares its eigenvectors.
"""
from ._core import (
    FAMILIES,
    KernelSpec,
    parse_kernel,
    as_spec,
    eigenvalue_map,
    build_kernel,
)
from .polynomial import (
    kernel_power,
    kernel_linear,
    kernel_first_order,
    chebyshev_sum,
    cheb_partial,
    cheb_series_partial,
)
from .poisson import kernel_poisson, cheb_series_closed_form, eigenvalue_map_poisson
from .smoothing import (
    kernel_smoothing_limit,
    SelfSmoothingReport,
    detect_self_smoothing,
    SpectralProfile,
    spectral_profile,
)
from .sbm_spectrum import (
    expected_adjacency,
    expected_laplacian_hat,
    smallgap_spectrum_closed_form,
    expand_multiset,
)

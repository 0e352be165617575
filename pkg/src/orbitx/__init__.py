"""Discrete Fourier-like analysis on the fundamental domains of A2, C2 and G2.

The package evaluates Weyl group C- and E-orbit functions, computes the
discrete orbit transforms on the grids F_M / F_M^e, the orbit convolutions
and applies them to filtering of square grayscale images.
"""

from .algebra import (
    AlgebraData,
    AlgebraId,
    WeylElement,
    algebra_data,
    even_subgroup,
    fold_to_fundamental,
    generate_weyl_group,
    pairing,
    simple_reflection,
)
from .convolution import (
    Kernel,
    builtin_kernel,
    convolve,
    convolve_C_spatial,
    convolve_C_spectral,
    convolve_E_spatial,
    convolve_E_spectral,
    normalize_kernel,
    product_identity_check,
)
from .grids import (
    EvenGridPoint,
    EvenLabelPoint,
    GridPoint,
    LabelPoint,
    enumerate_labels,
    enumerate_labels_even,
    enumerate_points,
    enumerate_points_even,
    epsilon,
    epsilon_even,
    h_dual,
    h_dual_even,
)
from .transforms import (
    DiscreteFunction,
    Spectrum,
    eval_C,
    eval_E,
    forward,
    forward_C,
    forward_E,
    inverse_C,
    inverse_C_grid,
    inverse_E,
    inverse_E_grid,
    inverse_grid,
    scalar_product_C,
    scalar_product_E,
    verify_orthogonality,
)

__version__ = "0.1.0"

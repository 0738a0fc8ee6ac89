"""Discrete cosine transforms for the four symmetric Chebyshev node families.

Nodes live on the half-circle: a grid is a set of equispaced angles
``theta`` in ``[0, pi]`` and the abscissae are ``x = cos(theta)``.  Four
distinct families exist for a given point count, distinguished by which of
the endpoints ``x = +1`` (``theta = 0``) and ``x = -1`` (``theta = pi``)
they contain:

================  ============================  ==========  ===========
family            theta_i                        endpoints   full circle
================  ============================  ==========  ===========
``TYPE_I``        ``pi * i / (n - 1)``           both        ``2(n-1)``
``TYPE_II``       ``pi * (2i + 1) / (2n)``       neither     ``2n``
``TYPE_V_MINUS``  ``pi * 2i / (2n - 1)``         ``+1``      ``2n - 1``
``TYPE_V_PLUS``   ``pi * (2i + 1) / (2n - 1)``   ``-1``      ``2n - 1``
================  ============================  ==========  ===========

"full circle" is the number of points the grid unfolds to on the whole
circle once reflected through ``theta = 0``; it is the quantity that
governs aliasing (modes ``k`` and ``k'`` coincide on the grid when
``k' = +-k mod N``).

Normalization: `dct_1d` returns coefficients ``c`` such that sampling
``cos(k * theta)`` on the grid yields exactly the unit vector ``e_k``, so
``f(theta_i) = sum_k c_k cos(k theta_i)`` always holds and `idct_1d` is an
exact inverse.  This "unit recovery" convention makes round trips and
unisolvency checks crisp; it differs from an orthonormal DCT by diagonal
factors only.

Types I and II are computed with :mod:`scipy.fft`; the type V transforms,
which common FFT packages do not provide, are computed by embedding the
reflected data in a complex FFT of length ``2n - 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.fft


class BoundaryType(enum.Enum):
    """Which endpoints of ``[-1, 1]`` a node family contains."""

    TYPE_I = "I"
    TYPE_II = "II"
    TYPE_V_MINUS = "V-"
    TYPE_V_PLUS = "V+"

    @property
    def contains_plus_one(self) -> bool:
        return self in (BoundaryType.TYPE_I, BoundaryType.TYPE_V_MINUS)

    @property
    def contains_minus_one(self) -> bool:
        return self in (BoundaryType.TYPE_I, BoundaryType.TYPE_V_PLUS)


@dataclass(frozen=True)
class Grid1D:
    """A one-dimensional symmetric node set.

    Attributes
    ----------
    n : int
        Number of nodes.
    boundary : BoundaryType
        Node family.
    thetas : ndarray
        Angles in ``[0, pi]``, strictly increasing.
    xs : ndarray
        Abscissae ``cos(thetas)`` (strictly decreasing).
    """

    n: int
    boundary: BoundaryType
    thetas: np.ndarray
    xs: np.ndarray

    @property
    def circle_count(self) -> int:
        """Number of distinct points after unfolding to the full circle."""
        return circle_count(self.n, self.boundary)


def circle_count(n: int, boundary: BoundaryType) -> int:
    if boundary is BoundaryType.TYPE_I:
        return 2 * (n - 1)
    if boundary is BoundaryType.TYPE_II:
        return 2 * n
    return 2 * n - 1


def grid_spec_from_circle(N: int, half_shift: int) -> tuple[int, BoundaryType]:
    """Node count and family of the grid with ``N`` full-circle points.

    ``half_shift`` selects whether the grid contains ``theta = 0``
    (``0``) or is offset by half a spacing (``1``).
    """
    if N < 1 or half_shift not in (0, 1):
        raise ValueError(f"invalid grid spec N={N}, half_shift={half_shift}")
    if N % 2 == 0:
        if half_shift == 0:
            return N // 2 + 1, BoundaryType.TYPE_I
        return N // 2, BoundaryType.TYPE_II
    if half_shift == 0:
        return (N + 1) // 2, BoundaryType.TYPE_V_MINUS
    return (N + 1) // 2, BoundaryType.TYPE_V_PLUS


def nodes_1d(n: int, boundary: BoundaryType) -> Grid1D:
    """Build the ``n``-point node set of the given family.

    Angles are returned in increasing order, so ``xs`` runs from ``+1``
    (or just below) down to ``-1`` (or just above).

    Raises
    ------
    ValueError
        If ``n < 1``, or ``n < 2`` for ``TYPE_I``.
    """
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    if boundary is BoundaryType.TYPE_I and n < 2:
        raise ValueError("TYPE_I requires at least 2 nodes")
    i = np.arange(n)
    if boundary is BoundaryType.TYPE_I:
        thetas = np.pi * i / (n - 1)
    elif boundary is BoundaryType.TYPE_II:
        thetas = np.pi * (2 * i + 1) / (2 * n)
    elif boundary is BoundaryType.TYPE_V_MINUS:
        thetas = np.pi * (2 * i) / (2 * n - 1)
    else:
        thetas = np.pi * (2 * i + 1) / (2 * n - 1)
    return Grid1D(n=n, boundary=boundary, thetas=thetas, xs=np.cos(thetas))


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        raise ValueError("input samples contain NaN or Inf")


def analysis_prefactor(n: int, boundary: BoundaryType) -> np.ndarray:
    """Diagonal factor ``a_k`` of the analysis transform.

    ``c_k = a_k * sum_i w_i f_i cos(k theta_i)`` with ``w_i = 1/2`` at
    ``theta in {0, pi}`` and 1 elsewhere.
    """
    a = np.empty(n)
    if boundary is BoundaryType.TYPE_I:
        a[:] = 2.0 / (n - 1)
        a[0] = 1.0 / (n - 1)
        a[-1] = 1.0 / (n - 1)  # top mode pairs with itself on the circle
    elif boundary is BoundaryType.TYPE_II:
        a[:] = 2.0 / n
        a[0] = 1.0 / n
    else:
        N = 2 * n - 1
        a[:] = 4.0 / N
        a[0] = 2.0 / N
    return a


def node_weights(n: int, boundary: BoundaryType) -> np.ndarray:
    """Trapezoidal node weights ``w_i`` (1/2 at ``theta in {0, pi}``)."""
    w = np.ones(n)
    if boundary is BoundaryType.TYPE_I:
        w[0] = 0.5
        w[-1] = 0.5
    elif boundary is BoundaryType.TYPE_V_MINUS:
        w[0] = 0.5
    elif boundary is BoundaryType.TYPE_V_PLUS:
        w[-1] = 0.5
    return w


def _reflect_index(n: int, boundary: BoundaryType) -> np.ndarray:
    """Index map unfolding samples to the full circle (type V only)."""
    if boundary is BoundaryType.TYPE_V_MINUS:
        # angles 2*pi*j/N for j = 0..N-1; j >= n mirrors index N - j
        return np.concatenate([np.arange(n), np.arange(n - 1, 0, -1)])
    # V+: angles 2*pi*(j + 1/2)/N; j >= n mirrors index N - 1 - j
    return np.concatenate([np.arange(n), np.arange(n - 2, -1, -1)])


def _dct_v_axis(values: np.ndarray, boundary: BoundaryType, axis: int) -> np.ndarray:
    n = values.shape[axis]
    N = 2 * n - 1
    g = np.take(values, _reflect_index(n, boundary), axis=axis)
    G = scipy.fft.fft(g, axis=axis)
    G = np.moveaxis(G, axis, -1)[..., :n]
    if boundary is BoundaryType.TYPE_V_PLUS:
        G = G * np.exp(-1j * np.pi * np.arange(n) / N)
    coeffs = G.real * analysis_prefactor(n, boundary) / 2.0
    # prefactor absorbs both the 1/N and the half-sum duplication:
    # a_k/2 * G_k = (2 - delta_k0) G_k / N
    return np.moveaxis(coeffs, -1, axis)


def _idct_v_axis(coeffs: np.ndarray, boundary: BoundaryType, axis: int) -> np.ndarray:
    n = coeffs.shape[axis]
    N = 2 * n - 1
    c = np.moveaxis(coeffs, axis, -1)
    S = np.zeros(c.shape[:-1] + (N,), dtype=complex)
    S[..., 0] = c[..., 0]
    if n > 1:
        S[..., 1:n] = c[..., 1:] / 2.0
        if boundary is BoundaryType.TYPE_V_MINUS:
            S[..., n:] = c[..., -1:0:-1] / 2.0
        else:
            # raw index N - k carries -exp(-ik theta) on the half-offset grid
            S[..., n:] = -c[..., -1:0:-1] / 2.0
    if boundary is BoundaryType.TYPE_V_PLUS:
        S = S * np.exp(1j * np.pi * np.arange(N) / N)
    samples = scipy.fft.ifft(S, axis=-1).real * N
    return np.moveaxis(samples[..., :n], -1, axis)


def dct_axis(values: np.ndarray, boundary: BoundaryType, axis: int = -1) -> np.ndarray:
    """Analysis transform along one axis of a sample array."""
    values = np.asarray(values, dtype=float)
    _check_finite(values)
    n = values.shape[axis]
    if boundary is BoundaryType.TYPE_I:
        if n < 2:
            raise ValueError("TYPE_I requires at least 2 samples")
        y = scipy.fft.dct(values, type=1, axis=axis)
        shape = [1] * values.ndim
        shape[axis] = n
        return y * (analysis_prefactor(n, boundary) / 2.0).reshape(shape)
    if boundary is BoundaryType.TYPE_II:
        y = scipy.fft.dct(values, type=2, axis=axis)
        shape = [1] * values.ndim
        shape[axis] = n
        return y * (analysis_prefactor(n, boundary) / 2.0).reshape(shape)
    return _dct_v_axis(values, boundary, axis)


def idct_axis(coeffs: np.ndarray, boundary: BoundaryType, axis: int = -1) -> np.ndarray:
    """Synthesis transform along one axis: evaluate the cosine sum at the nodes."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = coeffs.shape[axis]
    if boundary is BoundaryType.TYPE_I:
        z = coeffs.copy()
        sl = [slice(None)] * coeffs.ndim
        sl[axis] = slice(1, -1)
        z[tuple(sl)] = z[tuple(sl)] / 2.0
        return scipy.fft.dct(z, type=1, axis=axis)
    if boundary is BoundaryType.TYPE_II:
        z = coeffs.copy()
        sl = [slice(None)] * coeffs.ndim
        sl[axis] = slice(1, None)
        z[tuple(sl)] = z[tuple(sl)] / 2.0
        return scipy.fft.dct(z, type=3, axis=axis)
    return _idct_v_axis(coeffs, boundary, axis)


def adjoint_dct_axis(functional: np.ndarray, boundary: BoundaryType, axis: int = -1) -> np.ndarray:
    """Transpose of `dct_axis` as a linear map (used for quadrature stencils).

    With ``A`` the analysis matrix, ``A = diag(a) C diag(w)`` where
    ``C[k, j] = cos(k theta_j)``, so ``A^T u = w * synth(a * u)``.
    """
    functional = np.asarray(functional, dtype=float)
    n = functional.shape[axis]
    shape = [1] * functional.ndim
    shape[axis] = n
    scaled = functional * analysis_prefactor(n, boundary).reshape(shape)
    out = idct_axis(scaled, boundary, axis=axis)
    return out * node_weights(n, boundary).reshape(shape)


def dct_1d(values: np.ndarray, boundary: BoundaryType) -> np.ndarray:
    """Coefficients ``c`` with ``f(theta_i) = sum_k c_k cos(k theta_i)``.

    Sampling ``cos(k theta)`` on the grid returns exactly ``e_k`` for
    every representable ``k`` (including the top type I mode).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("dct_1d expects a 1-d sample vector")
    return dct_axis(values, boundary, axis=0)


def idct_1d(coeffs: np.ndarray, boundary: BoundaryType) -> np.ndarray:
    """Exact inverse of `dct_1d`."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1:
        raise ValueError("idct_1d expects a 1-d coefficient vector")
    return idct_axis(coeffs, boundary, axis=0)


def dct_typeV(values: np.ndarray, variant: BoundaryType) -> np.ndarray:
    """Type V analysis transform via a reflected complex FFT of length 2n-1."""
    if variant not in (BoundaryType.TYPE_V_MINUS, BoundaryType.TYPE_V_PLUS):
        raise ValueError(f"variant must be a type V family, got {variant}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("empty sample vector")
    _check_finite(values)
    return _dct_v_axis(values, variant, axis=-1)


def idct_typeV(coeffs: np.ndarray, variant: BoundaryType) -> np.ndarray:
    """Synthesis inverse of `dct_typeV`."""
    if variant not in (BoundaryType.TYPE_V_MINUS, BoundaryType.TYPE_V_PLUS):
        raise ValueError(f"variant must be a type V family, got {variant}")
    return _idct_v_axis(np.asarray(coeffs, dtype=float), variant, axis=-1)


def dct_nd(values: np.ndarray, boundaries: tuple[BoundaryType, ...]) -> np.ndarray:
    """Separable analysis transform: `dct_axis` applied along every axis.

    Sampling ``prod_i cos(k_i theta_i)`` returns the unit tensor at
    multi-index ``k``; the result is independent of axis order.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != len(boundaries):
        raise ValueError(
            f"tensor has {values.ndim} axes but {len(boundaries)} boundary types given"
        )
    _check_finite(values)
    out = values
    for ax, boundary in enumerate(boundaries):
        out = dct_axis(out, boundary, axis=ax)
    return out


def idct_nd(coeffs: np.ndarray, boundaries: tuple[BoundaryType, ...]) -> np.ndarray:
    """Separable synthesis transform, inverse of `dct_nd`."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != len(boundaries):
        raise ValueError(
            f"tensor has {coeffs.ndim} axes but {len(boundaries)} boundary types given"
        )
    out = coeffs
    for ax, boundary in enumerate(boundaries):
        out = idct_axis(out, boundary, axis=ax)
    return out


def adjoint_dct_nd(functional: np.ndarray, boundaries: tuple[BoundaryType, ...]) -> np.ndarray:
    """Separable transpose of `dct_nd`."""
    functional = np.asarray(functional, dtype=float)
    out = functional
    for ax, boundary in enumerate(boundaries):
        out = adjoint_dct_axis(out, boundary, axis=ax)
    return out

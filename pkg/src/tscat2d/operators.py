"""Nystrom assembly of the four Helmholtz boundary operators on a curve.

All four operators (single layer S, double layer K, its adjoint KT, and
the hypersingular N) act on nodal values of densities on an equispaced
parameter grid.  The weakly singular kernels are split as

    M(t, tau) = M1(t, tau) * log(4 sin^2((t - tau)/2)) + M2(t, tau)

with M1, M2 smooth, and integrated with the global trigonometric
(Martensen-Kussmaul) rule: weights R_j for the log factor, the plain
trapezoid weight 2*pi/N for the smooth part.  The hypersingular operator
is assembled from its tangential-derivative form

    N = k^2 * B + (1/|x'|) d/dt o A o d/dtau,

where B is the S-type quadrature of the kernel with the n(t).n(tau)
factor and A the S-type quadrature without the arc-length Jacobian.

By default every matrix is assembled on a once-refined grid and then
compressed back to the requested nodes by trigonometric interpolation
(``oversample=2``).  The same-grid rule is spectrally accurate on
densities resolved by the grid but degrades on the last few modes below
the Nyquist frequency; the refined rule keeps every representable mode
uniformly accurate, which matters once operators are composed into
products.  ``oversample=1`` selects the plain same-grid rule.

Complex wavenumbers use the principal branch of the logarithm in the
split; Im k >= 0 is required.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import specfun
from .geometry import Curve, NodeGrid, grid as make_grid

_QUARTER_I = 0.25j
_INV_4PI = 1.0 / (4.0 * np.pi)

DEFAULT_OVERSAMPLE = 2


@dataclass(frozen=True, eq=False)
class DenseOp:
    """Dense Nystrom matrix of one boundary operator on one grid.

    Acting on nodal values approximates the operator applied to the
    trigonometric interpolant of the density.
    """

    matrix: np.ndarray
    grid: NodeGrid
    curve: Curve
    wavenumber: complex
    tag: str

    def apply(self, density: np.ndarray) -> np.ndarray:
        density = np.asarray(density)
        if density.shape[-1] != self.grid.n:
            raise ValueError(
                f"density length {density.shape[-1]} does not match grid size {self.grid.n}"
            )
        return self.matrix @ density


def kress_log_weights(n: int) -> np.ndarray:
    """Quadrature weights R_j for the log(4 sin^2((t - tau)/2)) factor.

    On the 2n-point grid t_j = pi*j/n,

        R_j = -(2*pi/n) * sum_{m=1}^{n-1} cos(m t_j)/m - (pi/n^2) cos(n t_j),

    and sum_j R_{|i-j|} f(t_j) integrates f against the log factor exactly
    for trigonometric polynomials f of degree < n.
    """
    if n < 2:
        raise ValueError(f"log-quadrature needs n >= 2, got {n}")
    t = np.pi * np.arange(2 * n) / n
    m = np.arange(1, n)
    r = -(2.0 * np.pi / n) * (np.cos(np.outer(t, m)) / m).sum(axis=1)
    return r - (np.pi / n**2) * np.cos(n * t)


def _check_wavenumber(k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise ValueError("wavenumber must be nonzero (Laplace limit not supported)")
    if k.imag < 0:
        raise ValueError("wavenumber must satisfy Im k >= 0")
    return k


class _KernelData:
    """Node geometry and cylinder-function values shared by all kernels."""

    def __init__(self, curve: Curve, grid: NodeGrid, k: complex):
        self.curve, self.grid, self.k = curve, grid, k
        t = grid.nodes
        self.pos = curve.x(t)
        self.d = curve.dx(t)
        self.dd = curve.ddx(t)
        self.jac = curve.jacobian(t)
        self.nrm = curve.normal(t)
        self.diff = self.pos[:, None, :] - self.pos[None, :, :]
        r = np.sqrt(self.diff[..., 0] ** 2 + self.diff[..., 1] ** 2)
        np.fill_diagonal(r, 1.0)  # placeholder; diagonals are set analytically
        self.r = r
        dt = t[:, None] - t[None, :]
        mask = ~np.eye(grid.n, dtype=bool)
        self.logsin = np.log(
            4.0 * np.sin(dt / 2.0) ** 2, where=mask, out=np.zeros_like(dt)
        )
        z = k * r
        self.h0 = specfun.hankel1(0, z)
        self.j0 = specfun.bessel_j(0, z)
        self.h1 = specfun.hankel1(1, z)
        self.j1 = specfun.bessel_j(1, z)
        rj = kress_log_weights(grid.n // 2)
        idx = (np.arange(grid.n)[:, None] - np.arange(grid.n)[None, :]) % grid.n
        self.log_weights = rj[idx]
        self.trapz = grid.weight


def _s_type_matrix(data: _KernelData, factor, factor_diag) -> np.ndarray:
    """Rule for the kernel (i/4) H_0(k r) * factor(t, tau)."""
    m_full = _QUARTER_I * data.h0 * factor
    m1 = -_INV_4PI * data.j0 * factor
    m2 = m_full - m1 * data.logsin
    np.fill_diagonal(m1, -_INV_4PI * np.broadcast_to(factor_diag, (data.grid.n,)))
    np.fill_diagonal(
        m2,
        (
            _QUARTER_I
            - specfun.EULER_GAMMA / (2.0 * np.pi)
            - np.log(data.k * data.jac / 2.0) / (2.0 * np.pi)
        )
        * factor_diag,
    )
    return data.log_weights * m1 + data.trapz * m2


def _double_layer_diag(data: _KernelData) -> np.ndarray:
    # smooth diagonal limit of the K and KT kernels:
    # (x1'' x2' - x2'' x1') / (4 pi |x'|^2)
    d, dd = data.d, data.dd
    return (dd[:, 0] * d[:, 1] - dd[:, 1] * d[:, 0]) * _INV_4PI / data.jac**2


def _k_matrix(data: _KernelData) -> np.ndarray:
    # kernel (i k / 4) H_1(k r) (x(t) - x(tau)) . n(tau) |x'(tau)| / r
    dot = data.diff[..., 0] * data.d[None, :, 1] - data.diff[..., 1] * data.d[None, :, 0]
    full = _QUARTER_I * data.k * data.h1 * dot / data.r
    m1 = -data.k * _INV_4PI * data.j1 * dot / data.r
    m2 = full - m1 * data.logsin
    np.fill_diagonal(m1, 0.0)
    np.fill_diagonal(m2, _double_layer_diag(data))
    return data.log_weights * m1 + data.trapz * m2


def _kt_matrix(data: _KernelData) -> np.ndarray:
    # kernel -(i k / 4) H_1(k r) (x(t) - x(tau)) . n(t) |x'(tau)| / r
    dot = data.diff[..., 0] * data.d[:, None, 1] - data.diff[..., 1] * data.d[:, None, 0]
    scale = data.jac[None, :] / data.jac[:, None]
    full = -_QUARTER_I * data.k * data.h1 * dot / data.r * scale
    m1 = data.k * _INV_4PI * data.j1 * dot / data.r * scale
    m2 = full - m1 * data.logsin
    np.fill_diagonal(m1, 0.0)
    np.fill_diagonal(m2, _double_layer_diag(data))
    return data.log_weights * m1 + data.trapz * m2


def _n_matrix(data: _KernelData) -> np.ndarray:
    nn = data.nrm @ data.nrm.T
    b = _s_type_matrix(data, nn * data.jac[None, :], data.jac)
    a = _s_type_matrix(data, 1.0, 1.0)
    dmat = spectral_derivative_matrix(data.grid.n)
    return data.k**2 * b + (dmat @ a @ dmat) / data.jac[:, None]


def _s_matrix(data: _KernelData) -> np.ndarray:
    return _s_type_matrix(data, data.jac[None, :], data.jac)


def prolongation_matrix(n: int, factor: int) -> np.ndarray:
    """Trigonometric interpolation from n nodes to factor*n nodes.

    The Nyquist coefficient is split evenly between +-n/2, matching the
    real cosine convention of the even-n interpolant.
    """
    if n % 2 != 0:
        raise ValueError(f"interpolation needs even n, got {n}")
    if factor < 1:
        raise ValueError(f"refinement factor must be >= 1, got {factor}")
    if factor == 1:
        return np.eye(n)
    big = factor * n
    half = n // 2
    c = np.fft.fft(np.eye(n), axis=0)
    spec = np.zeros((big, n), dtype=complex)
    spec[:half] = c[:half]
    spec[half] = 0.5 * c[half]
    spec[big - half] = 0.5 * c[half]
    spec[big - half + 1 :] = c[half + 1 :]
    return np.real(np.fft.ifft(spec, axis=0)) * factor


def _compress(mat: np.ndarray, prolong: np.ndarray, factor: int) -> np.ndarray:
    return (mat @ prolong)[::factor, :]


def _assemble_one(curve, grid, k, kind, oversample):
    k = _check_wavenumber(k)
    if oversample < 1:
        raise ValueError(f"oversample must be >= 1, got {oversample}")
    builders = {"S": _s_matrix, "K": _k_matrix, "KT": _kt_matrix, "N": _n_matrix}
    fine = grid if oversample == 1 else make_grid(oversample * grid.n)
    data = _KernelData(curve, fine, k)
    mat = builders[kind](data)
    if oversample > 1:
        mat = _compress(mat, prolongation_matrix(grid.n, oversample), oversample)
    return DenseOp(matrix=mat, grid=grid, curve=curve, wavenumber=k, tag=kind)


def assemble_S(curve: Curve, grid: NodeGrid, k: complex, oversample: int = DEFAULT_OVERSAMPLE) -> DenseOp:
    """Single layer operator S_k (kernel (i/4) H_0(k|x - y|), with Jacobian)."""
    return _assemble_one(curve, grid, k, "S", oversample)


def assemble_K(curve: Curve, grid: NodeGrid, k: complex, oversample: int = DEFAULT_OVERSAMPLE) -> DenseOp:
    """Double layer operator K_k (normal derivative at the source point)."""
    return _assemble_one(curve, grid, k, "K", oversample)


def assemble_KT(curve: Curve, grid: NodeGrid, k: complex, oversample: int = DEFAULT_OVERSAMPLE) -> DenseOp:
    """Adjoint double layer K_k^T (normal derivative at the target point)."""
    return _assemble_one(curve, grid, k, "KT", oversample)


def assemble_N(curve: Curve, grid: NodeGrid, k: complex, oversample: int = DEFAULT_OVERSAMPLE) -> DenseOp:
    """Hypersingular operator N_k in tangential-derivative form."""
    return _assemble_one(curve, grid, k, "N", oversample)


@dataclass(frozen=True, eq=False)
class BoundaryOperators:
    """The four operators of one wavenumber on one grid."""

    s: DenseOp
    k: DenseOp
    kt: DenseOp
    n: DenseOp


def boundary_operator_set(
    curve: Curve, grid: NodeGrid, k: complex, oversample: int = DEFAULT_OVERSAMPLE
) -> BoundaryOperators:
    """Assemble S, K, KT and N for one wavenumber, sharing the kernel data."""
    k = _check_wavenumber(k)
    fine = grid if oversample == 1 else make_grid(oversample * grid.n)
    data = _KernelData(curve, fine, k)
    mats = {
        "S": _s_matrix(data),
        "K": _k_matrix(data),
        "KT": _kt_matrix(data),
        "N": _n_matrix(data),
    }
    if oversample > 1:
        p = prolongation_matrix(grid.n, oversample)
        mats = {tag: _compress(m, p, oversample) for tag, m in mats.items()}
    mk = lambda tag: DenseOp(matrix=mats[tag], grid=grid, curve=curve, wavenumber=k, tag=tag)
    return BoundaryOperators(s=mk("S"), k=mk("K"), kt=mk("KT"), n=mk("N"))


def spectral_derivative_matrix(n: int) -> np.ndarray:
    """Differentiation matrix of the trigonometric interpolant (even n).

    Exact for modes |m| < n/2; the Nyquist mode is mapped to zero, which
    keeps the matrix real.
    """
    if n % 2 != 0:
        raise ValueError(f"spectral differentiation needs even n, got {n}")
    j = np.arange(n)
    col = np.zeros(n)
    col[1:] = 0.5 * (-1.0) ** j[1:] / np.tan(np.pi * j[1:] / n)
    idx = (j[:, None] - j[None, :]) % n
    return col[idx]


def spectral_derivative(density: np.ndarray) -> np.ndarray:
    """d/dt of the trigonometric interpolant of nodal values (FFT based)."""
    density = np.asarray(density)
    n = density.shape[-1]
    if n % 2 != 0:
        raise ValueError(f"spectral differentiation needs even n, got {n}")
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    freqs[n // 2] = 0.0  # Nyquist mode dropped
    return np.fft.ifft(1j * freqs * np.fft.fft(density))


def fourier_modes(n: int) -> np.ndarray:
    """Mode numbers -n/2 .. n/2 - 1 matching fourier_coeffs ordering."""
    return np.arange(-(n // 2), (n + 1) // 2)


def fourier_coeffs(density: np.ndarray) -> np.ndarray:
    """Discrete Fourier coefficients c_m, ordered m = -n/2 .. n/2 - 1."""
    density = np.asarray(density)
    n = density.shape[-1]
    return np.fft.fftshift(np.fft.fft(density)) / n

"""Bessel and Hankel functions for the Helmholtz kernels.

Validated wrappers around scipy.special (AMOS): principal branch for
complex arguments, explicit domain checks, and overflow reported as an
error instead of silently propagating inf/nan.  Derivatives come from the
recurrence identities F0' = -F1, Fn' = F_{n-1} - (n/z) Fn.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

EULER_GAMMA = 0.5772156649015329

_MAX_ORDER = 200


class SpecialFunctionError(ArithmeticError):
    """Evaluation left the supported range (overflow/underflow)."""


def _check_finite(name: str, n, z, values: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise SpecialFunctionError(f"{name}(n={n}) overflowed at |z| ~ {np.max(np.abs(z)):.3g}")
    return values


def bessel_j(n: int, z) -> np.ndarray | complex:
    """J_n(z) for integer n >= 0 and real or complex z (scalar or array)."""
    if n < 0 or n > _MAX_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_ORDER}], got {n}")
    z = np.asarray(z)
    if np.any(np.abs(z) > 1.0e4):
        raise ValueError("argument outside supported range |z| <= 1e4")
    out = _sp.jv(n, z)
    return _check_finite("bessel_j", n, z, out)[()]


def bessel_y(n: int, x) -> np.ndarray | float:
    """Y_n(x) for integer n >= 0 and real x > 0."""
    if n < 0 or n > _MAX_ORDER:
        raise ValueError(f"order must be in [0, {_MAX_ORDER}], got {n}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Y_n requires x > 0 (logarithmic singularity at 0)")
    out = _sp.yv(n, x)
    return _check_finite("bessel_y", n, x, out)[()]


def hankel1(n: int, z) -> np.ndarray | complex:
    """H_n^(1)(z) for n in {0, 1} on the closed upper half plane.

    The log-split kernels only ever need orders 0 and 1; higher orders go
    through hankel1_seq.
    """
    if n not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {n}")
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    if np.any(a < 1.0e-14):
        raise ValueError("argument too close to the singular point z = 0")
    if np.any(a > 1.0e4):
        raise ValueError("argument outside supported range |z| <= 1e4")
    if np.any(z.imag < 0):
        raise ValueError("H_n^(1) supported only for Im z >= 0")
    out = _sp.hankel1(n, z)
    return _check_finite("hankel1", n, z, out)[()]


def hankel1_seq(n_max: int, z: complex) -> np.ndarray:
    """H_0^(1)(z) .. H_{n_max}^(1)(z) for a single argument z.

    The returned values satisfy the three-term recurrence
    H_{n+1} = (2n/z) H_n - H_{n-1} to working accuracy.
    """
    if n_max < 0 or n_max > _MAX_ORDER:
        raise ValueError(f"n_max must be in [0, {_MAX_ORDER}], got {n_max}")
    z = complex(z)
    if not 1.0e-14 <= abs(z) <= 1.0e4:
        raise ValueError("argument outside supported range 1e-14 <= |z| <= 1e4")
    if z.imag < 0:
        raise ValueError("H_n^(1) supported only for Im z >= 0")
    out = _sp.hankel1(np.arange(n_max + 1), z)
    return _check_finite("hankel1_seq", n_max, z, np.asarray(out, dtype=complex))


def bessel_j_seq(n_max: int, z: complex) -> np.ndarray:
    """J_0(z) .. J_{n_max}(z) for a single real or complex argument."""
    if n_max < 0 or n_max > _MAX_ORDER:
        raise ValueError(f"n_max must be in [0, {_MAX_ORDER}], got {n_max}")
    out = _sp.jv(np.arange(n_max + 1), z)
    return _check_finite("bessel_j_seq", n_max, z, np.asarray(out, dtype=complex))


def derivative_seq(values: np.ndarray, z: complex) -> np.ndarray:
    """Order-wise derivatives of a cylinder-function sequence F_0..F_m.

    Uses F_0' = -F_1 and F_n' = F_{n-1} - (n/z) F_n; valid for J, Y and
    H^(1) alike.
    """
    values = np.asarray(values)
    if values.size < 2:
        raise ValueError("need at least orders 0 and 1 to form derivatives")
    d = np.empty_like(values)
    d[0] = -values[1]
    ns = np.arange(1, values.size)
    d[1:] = values[:-1] - (ns / z) * values[1:]
    return d

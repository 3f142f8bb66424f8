"""Block systems for the 2D acoustic transmission problem.

Three assemblies of the same physics:

  * combined-source ("gcsie"): the exterior field is sought as
    DL1(R11 a + R12 b) - SL1(R21 a + R22 b) and the interior field as
    -DL2(R11 a + R12 b - a) + SL2(R21 a + R22 b - b)/nu, with the
    smoothed admittance blocks R11 = nu/(1+nu) I, R12 = -2 S_kappa/(1+nu),
    R21 = 2 nu N_kappa/(1+nu), R22 = I/(1+nu) at a complex wavenumber
    kappa.  Enforcing the jump conditions yields a 2x2 system that is a
    compact perturbation of the identity.

  * combined-source, Calderon-simplified ("gcsie-explicit"): the same
    system with the operator products expanded through the Calderon
    identities S N = K^2 - I/4 etc.; analytically equal to the composed
    form, discretely equal up to quadrature error.

  * classical ("classical"): the direct second-kind system in the
    interior Cauchy data (phi, psi) = (Dirichlet, Neumann traces of the
    interior field), obtained by adding the exterior and interior trace
    relations of the Green representations.

Right-hand sides come from incident plane-wave traces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .geometry import Curve, NodeGrid
from .operators import (
    BoundaryOperators,
    DenseOp,
    boundary_operator_set,
)

FORMULATIONS = ("gcsie", "gcsie-explicit", "classical")


@dataclass(frozen=True, eq=False)
class TransmissionConfig:
    """Physical and discretization data of one transmission solve.

    delta1/delta2 select optional correction terms of the generic
    regularizer family; only the smoothed two-dimensional choice
    delta1 = delta2 = 0 is implemented here.
    """

    curve: Curve
    k1: float
    k2: float
    nu: float
    kappa: complex | None = None
    n_nodes: int = 128
    delta1: int = 0
    delta2: int = 0

    def __post_init__(self):
        for name in ("k1", "k2", "nu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", complex(self.k1, 0.5 * self.k1))
        kap = complex(self.kappa)
        object.__setattr__(self, "kappa", kap)
        if kap.real < 0 or kap.imag <= 0:
            raise ValueError(
                f"kappa must satisfy Re kappa >= 0 and Im kappa > 0, got {kap}"
            )
        if self.delta1 != 0 or self.delta2 != 0:
            raise ValueError("only delta1 = delta2 = 0 is supported")
        if self.n_nodes % 2 != 0 or self.n_nodes < 4:
            raise ValueError(f"n_nodes must be even and >= 4, got {self.n_nodes}")


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave e^{i k1 d.x} with unit direction d = (cos alpha, sin alpha)."""

    angle: float
    k1: float

    @property
    def direction(self) -> np.ndarray:
        return np.array([np.cos(self.angle), np.sin(self.angle)])


def incident_traces(wave: IncidentWave, curve: Curve, grid: NodeGrid):
    """Dirichlet and Neumann traces (f, g) of the incident wave on the curve."""
    pos = curve.x(grid.nodes)
    nrm = curve.normal(grid.nodes)
    phase = np.exp(1j * wave.k1 * pos @ wave.direction)
    return phase, 1j * wave.k1 * (nrm @ wave.direction) * phase


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """2x2 block operator with right-hand side on a shared grid."""

    d11: np.ndarray
    d12: np.ndarray
    d21: np.ndarray
    d22: np.ndarray
    rhs: np.ndarray
    formulation: str
    grid: NodeGrid

    def __post_init__(self):
        n = self.grid.n
        for name in ("d11", "d12", "d21", "d22"):
            if getattr(self, name).shape != (n, n):
                raise ValueError(f"block {name} does not match grid size {n}")
        if self.rhs.shape != (2 * n,):
            raise ValueError(f"rhs length {self.rhs.shape} != {2 * n}")

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.d11, self.d12], [self.d21, self.d22]])

    def split(self, x: np.ndarray):
        """Split a stacked solution vector into its two densities."""
        n = self.grid.n
        return x[:n], x[n:]


def _operator_sets(
    config: TransmissionConfig,
    grid: NodeGrid,
    wavenumbers,
    ops: Mapping[complex, BoundaryOperators] | None,
):
    out = {}
    for k in wavenumbers:
        k = complex(k)
        if ops is not None and k in ops:
            out[k] = ops[k]
        else:
            out[k] = boundary_operator_set(config.curve, grid, k)
    return out


def regularizer_blocks(
    config: TransmissionConfig,
    grid: NodeGrid,
    ops: Mapping[complex, BoundaryOperators] | None = None,
):
    """Smoothed admittance blocks (R11, R12, R21, R22) as dense operators."""
    ok = _operator_sets(config, grid, [config.kappa], ops)[complex(config.kappa)]
    nu = config.nu
    c = 1.0 + nu
    eye = np.eye(grid.n)
    mk = lambda m, tag: DenseOp(
        matrix=m, grid=grid, curve=config.curve, wavenumber=complex(config.kappa), tag=tag
    )
    return (
        mk(nu / c * eye, "R11"),
        mk(-2.0 / c * ok.s.matrix, "R12"),
        mk(2.0 * nu / c * ok.n.matrix, "R21"),
        mk(1.0 / c * eye, "R22"),
    )


def combined_source_blocks(
    o1: BoundaryOperators,
    o2: BoundaryOperators,
    ok: BoundaryOperators,
    nu: float,
):
    """Composed form of the combined-source blocks.

    D11 = I/2 - K2 + (K1 + K2) R11 - (S1 + S2/nu) R21, and analogously
    for the other three blocks, with the smoothed admittance blocks
    substituted directly.
    """
    n = o1.s.matrix.shape[0]
    eye = np.eye(n)
    c = 1.0 + nu
    s1, k1m, kt1, n1 = o1.s.matrix, o1.k.matrix, o1.kt.matrix, o1.n.matrix
    s2, k2m, kt2, n2 = o2.s.matrix, o2.k.matrix, o2.kt.matrix, o2.n.matrix
    sk, nk = ok.s.matrix, ok.n.matrix

    r11 = nu / c
    r22 = 1.0 / c
    r12 = -2.0 / c * sk
    r21 = 2.0 * nu / c * nk

    sum_s = s1 + s2 / nu
    sum_k = k1m + k2m
    sum_kt = kt1 + kt2
    sum_n = n1 + nu * n2

    d11 = 0.5 * eye - k2m + r11 * sum_k - sum_s @ r21
    d12 = s2 / nu + sum_k @ r12 - r22 * sum_s
    d21 = -nu * n2 + r11 * sum_n - sum_kt @ r21
    d22 = 0.5 * eye + kt2 + sum_n @ r12 - r22 * sum_kt
    return d11, d12, d21, d22


def combined_source_blocks_explicit(
    o1: BoundaryOperators,
    o2: BoundaryOperators,
    ok: BoundaryOperators,
    nu: float,
):
    """Calderon-simplified form of the combined-source blocks.

    Equal to the composed form for the exact operators; the discrete
    difference is the residual of the discrete Calderon identities.
    """
    n = o1.s.matrix.shape[0]
    eye = np.eye(n)
    c = 1.0 + nu
    s1, k1m, kt1, n1 = o1.s.matrix, o1.k.matrix, o1.kt.matrix, o1.n.matrix
    s2, k2m, kt2, n2 = o2.s.matrix, o2.k.matrix, o2.kt.matrix, o2.n.matrix
    sk, nk, ktk = ok.s.matrix, ok.n.matrix, ok.kt.matrix

    d11 = (
        eye
        - k2m / c
        + nu / c * k1m
        - 2.0 * nu / c * (s1 @ (nk - n1))
        - 2.0 * nu / c * (k1m @ k1m)
        - 2.0 / c * (s2 @ (nk - n2))
        - 2.0 / c * (k2m @ k2m)
    )
    d12 = (s2 - s1) / c - 2.0 / c * ((k1m + k2m) @ sk)
    d21 = nu / c * (n1 - n2) - 2.0 * nu / c * ((kt1 + kt2) @ nk)
    d22 = (
        eye
        + nu / c * kt2
        - kt1 / c
        - 2.0 / c * ((n1 - nk) @ sk)
        - 2.0 * nu / c * ((n2 - nk) @ sk)
        - 2.0 * (ktk @ ktk)
    )
    return d11, d12, d21, d22


def classical_blocks(o1: BoundaryOperators, o2: BoundaryOperators, nu: float):
    """Direct second-kind blocks in the interior Cauchy data (phi, psi)."""
    n = o1.s.matrix.shape[0]
    eye = np.eye(n)
    d11 = eye - o1.k.matrix + o2.k.matrix
    d12 = nu * o1.s.matrix - o2.s.matrix
    d21 = o2.n.matrix - o1.n.matrix
    d22 = 0.5 * (1.0 + nu) * eye + nu * o1.kt.matrix - o2.kt.matrix
    return d11, d12, d21, d22


def _assemble_combined(
    config: TransmissionConfig,
    grid: NodeGrid,
    incident: IncidentWave,
    ops,
    explicit: bool,
) -> BlockSystem:
    sets = _operator_sets(config, grid, [config.k1, config.k2, config.kappa], ops)
    o1, o2, ok = sets[complex(config.k1)], sets[complex(config.k2)], sets[complex(config.kappa)]
    builder = combined_source_blocks_explicit if explicit else combined_source_blocks
    d11, d12, d21, d22 = builder(o1, o2, ok, config.nu)
    f, g = incident_traces(incident, config.curve, grid)
    return BlockSystem(
        d11=d11,
        d12=d12,
        d21=d21,
        d22=d22,
        rhs=np.concatenate([-f, -g]),
        formulation="gcsie-explicit" if explicit else "gcsie",
        grid=grid,
    )


def assemble_gcsie_composed(
    config: TransmissionConfig,
    grid: NodeGrid,
    incident: IncidentWave,
    ops: Mapping[complex, BoundaryOperators] | None = None,
) -> BlockSystem:
    """Combined-source system, blocks built by operator composition."""
    return _assemble_combined(config, grid, incident, ops, explicit=False)


def assemble_gcsie_explicit(
    config: TransmissionConfig,
    grid: NodeGrid,
    incident: IncidentWave,
    ops: Mapping[complex, BoundaryOperators] | None = None,
) -> BlockSystem:
    """Combined-source system in the Calderon-simplified explicit form."""
    return _assemble_combined(config, grid, incident, ops, explicit=True)


def assemble_classical(
    config: TransmissionConfig,
    grid: NodeGrid,
    incident: IncidentWave,
    ops: Mapping[complex, BoundaryOperators] | None = None,
) -> BlockSystem:
    """Direct second-kind system in the interior Cauchy data.

    Row one adds the exterior and interior Dirichlet trace relations,
    row two the Neumann ones:

        (I - K1 + K2) phi + (nu S1 - S2) psi = (I/2 - K1) f + S1 g
        (N2 - N1) phi + ((1+nu)/2 I + nu K1^T - K2^T) psi
                                             = -N1 f + (I/2 + K1^T) g
    """
    sets = _operator_sets(config, grid, [config.k1, config.k2], ops)
    o1, o2 = sets[complex(config.k1)], sets[complex(config.k2)]
    d11, d12, d21, d22 = classical_blocks(o1, o2, config.nu)
    f, g = incident_traces(incident, config.curve, grid)
    rhs1 = 0.5 * f - o1.k.matrix @ f + o1.s.matrix @ g
    rhs2 = -(o1.n.matrix @ f) + 0.5 * g + o1.kt.matrix @ g
    return BlockSystem(
        d11=d11,
        d12=d12,
        d21=d21,
        d22=d22,
        rhs=np.concatenate([rhs1, rhs2]),
        formulation="classical",
        grid=grid,
    )


def assemble(
    config: TransmissionConfig,
    grid: NodeGrid,
    incident: IncidentWave,
    formulation: str,
    ops: Mapping[complex, BoundaryOperators] | None = None,
) -> BlockSystem:
    """Dispatch on the formulation tag (gcsie | gcsie-explicit | classical)."""
    if formulation == "gcsie":
        return assemble_gcsie_composed(config, grid, incident, ops)
    if formulation == "gcsie-explicit":
        return assemble_gcsie_explicit(config, grid, incident, ops)
    if formulation == "classical":
        return assemble_classical(config, grid, incident, ops)
    raise ValueError(f"unknown formulation {formulation!r}; expected one of {FORMULATIONS}")

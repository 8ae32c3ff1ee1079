"""Ladder operators on fixed angular-momentum subspaces of a charged particle
in a uniform magnetic field plus isotropic parabolic confinement.

The two-index basis |n, m> (n >= m >= 0) carries two commuting oscillator
ladders.  At fixed m the states are relabelled by the radial offset
nu = n - m, and the su(1,1) generators act tridiagonally:

    K+ |nu-1> = sqrt(nu (nu+m)) |nu>
    K- |nu>   = sqrt(nu (nu+m)) |nu-1>
    K3 |nu>   = (nu + (m+1)/2) |nu>

so [K+, K-] = -2 K3 and [K3, K+-] = +- K+-.  The individual linear-momentum
and center-coordinate ladders change m and therefore leave the subspace;
requesting them yields flagged diagonal/band surrogates that are only
meaningful inside the products used by the Hamiltonian reconstruction.

All matrices are dense complex128 with explicit bandwidth metadata; loops are
plain index arithmetic over the (depth+1)-dimensional truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specfun import DomainError

_LADDER_KINDS = ("pi_plus", "pi_minus", "x_plus", "x_minus",
                 "k_plus", "k_minus", "k3", "number")


@dataclass(frozen=True)
class PhysicalParams:
    """Model constants: confinement frequency, cyclotron frequency, hbar, mass.

    The composite frequency Omega = sqrt(omega_c^2 + 4 omega0^2) and the slow
    frequency (Omega - omega_c)/2 are always derived, never stored.
    """

    omega0: float = 1.0
    omega_c: float = 1.0
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.omega0 < 0.0 or self.omega_c < 0.0:
            raise DomainError("frequencies must be non-negative")
        if self.omega0 == 0.0 and self.omega_c == 0.0:
            raise DomainError("omega0 and omega_c cannot both vanish")
        if self.hbar <= 0.0 or self.mass <= 0.0:
            raise DomainError("hbar and mass must be positive")

    @property
    def omega(self) -> float:
        """Composite frequency Omega = sqrt(omega_c^2 + 4 omega0^2)."""
        return math.hypot(self.omega_c, 2.0 * self.omega0)

    @property
    def omega_minus(self) -> float:
        """Slow rotation frequency (Omega - omega_c)/2 of the center ladder."""
        return 0.5 * (self.omega - self.omega_c)

    @property
    def magnetic_length(self) -> float:
        """l = sqrt(hbar / (mass Omega))."""
        return math.sqrt(self.hbar / (self.mass * self.omega))

    @property
    def slow_length(self) -> float:
        """l_minus = sqrt(hbar / (mass (Omega - omega_c)/2)); needs omega0 > 0."""
        om = self.omega_minus
        if om <= 0.0:
            raise DomainError("slow length undefined without confinement (omega0 = 0)")
        return math.sqrt(self.hbar / (self.mass * om))

    @property
    def epsilon_gap(self) -> float:
        """Ladder energy quantum hbar (Omega - omega_c)/2 of the nu index."""
        return self.hbar * self.omega_minus


@dataclass(frozen=True)
class SubspaceSpec:
    """Fixed angular-momentum sector m with truncation depth (max nu).

    depth=None requests automatic depth selection where supported (coherent
    state construction); matrix builders require an explicit depth >= 8.
    """

    m: int
    depth: int | None = None

    def __post_init__(self):
        if self.m < 0 or self.m != int(self.m):
            raise DomainError(f"m must be an integer >= 0, got {self.m!r}")
        if self.depth is not None and (self.depth < 8 or self.depth != int(self.depth)):
            raise ValueError(f"explicit depth must be an integer >= 8, got {self.depth!r}")

    def require_depth(self) -> int:
        if self.depth is None:
            raise ValueError("this operation needs an explicit truncation depth")
        return int(self.depth)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense truncated operator with bandwidth metadata.

    entries is (depth+1) x (depth+1) complex128 and read-only; band is the
    largest |row - col| carrying a nonzero entry (0 = diagonal); surrogate
    marks within-subspace stand-ins for operators that genuinely map between
    different m sectors.
    """

    entries: np.ndarray
    band: int
    label: str = ""
    surrogate: bool = False

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"entries must be square, got shape {a.shape}")
        n = a.shape[0]
        if not 0 <= self.band < n:
            raise ValueError(f"band {self.band} incompatible with dimension {n}")
        mask = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) > self.band
        if np.any(a[mask] != 0.0):
            raise ValueError("nonzero entries outside the declared band")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def adjoint(op: OperatorMatrix) -> OperatorMatrix:
    """Hermitian adjoint, preserving bandwidth metadata."""
    return OperatorMatrix(op.entries.conj().T, op.band,
                          label=f"adjoint({op.label})", surrogate=op.surrogate)


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """[a, b] = ab - ba on the common truncation."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    band = min(a.band + b.band, a.dim - 1)
    ab = a.entries @ b.entries - b.entries @ a.entries
    # product truncation can only populate the combined band
    return OperatorMatrix(ab, band, label=f"[{a.label},{b.label}]",
                          surrogate=a.surrogate or b.surrogate)


def ladder_matrix(kind: str, spec: SubspaceSpec) -> OperatorMatrix:
    """Truncated matrix of one ladder generator on the m sector.

    kinds: k_plus, k_minus, k3, number act within the sector and are exact;
    pi_plus/pi_minus return the diagonal of their within-sector product
    (the individual factors shift both n and m) and x_plus/x_minus return
    slot-shift band surrogates (the individual factors shift m), all four
    flagged surrogate=True.
    """
    if kind not in _LADDER_KINDS:
        raise ValueError(f"unknown ladder kind {kind!r}; expected one of {_LADDER_KINDS}")
    K = spec.require_depth()
    m = spec.m
    n = K + 1
    a = np.zeros((n, n), dtype=np.complex128)
    if kind == "k_plus":
        for nu in range(1, n):
            a[nu, nu - 1] = math.sqrt(nu * (nu + m))
        return OperatorMatrix(a, 1, label="k_plus")
    if kind == "k_minus":
        for nu in range(1, n):
            a[nu - 1, nu] = math.sqrt(nu * (nu + m))
        return OperatorMatrix(a, 1, label="k_minus")
    if kind == "k3":
        for nu in range(n):
            a[nu, nu] = nu + 0.5 * (m + 1)
        return OperatorMatrix(a, 0, label="k3")
    if kind == "number":
        for nu in range(n):
            a[nu, nu] = nu
        return OperatorMatrix(a, 0, label="number")
    if kind in ("pi_plus", "pi_minus"):
        # within-sector surrogate: only the product pi+ pi- = diag(n) survives
        for nu in range(n):
            a[nu, nu] = m + nu
        return OperatorMatrix(a, 0, label=f"{kind}(product surrogate)",
                              surrogate=True)
    if kind == "x_plus":
        # slot-lowering shadow of the m-raising center ladder
        for nu in range(1, n):
            a[nu - 1, nu] = math.sqrt(nu)
        return OperatorMatrix(a, 1, label="x_plus(surrogate)", surrogate=True)
    # x_minus: slot-raising shadow of the m-lowering center ladder
    for nu in range(1, n):
        a[nu, nu - 1] = math.sqrt(nu)
    return OperatorMatrix(a, 1, label="x_minus(surrogate)", surrogate=True)


def level_energy(n: int, m: int, params: PhysicalParams) -> float:
    """Spectrum value hbar Omega (n + 1/2) - (hbar/2)(Omega - omega_c) m."""
    if n < m or m < 0:
        raise DomainError(f"level indices need n >= m >= 0, got n={n}, m={m}")
    om = params.omega
    return params.hbar * om * (n + 0.5) \
        - 0.5 * params.hbar * (om - params.omega_c) * m


def hamiltonian_matrix(spec: SubspaceSpec, params: PhysicalParams) -> OperatorMatrix:
    """Diagonal truncated Hamiltonian on the m sector (closed-form spectrum)."""
    K = spec.require_depth()
    m = spec.m
    a = np.zeros((K + 1, K + 1), dtype=np.complex128)
    for nu in range(K + 1):
        a[nu, nu] = level_energy(m + nu, m, params)
    return OperatorMatrix(a, 0, label="hamiltonian")


def hamiltonian_from_ladders(spec: SubspaceSpec, params: PhysicalParams) -> OperatorMatrix:
    """Hamiltonian reassembled from dimensionful ladder products.

    (1/2) [ (pi+ pi- / 2M)(1 + omega_c/Omega)
            + (M Omega^2 / 2)(1 - omega_c/Omega) X- X+  + hbar Omega ]
    with pi+ pi- = 2 M Omega hbar diag(n) and X- X+ = 2 l^2 diag(nu) built
    from the surrogate matrices; must reproduce hamiltonian_matrix exactly.
    """
    K = spec.require_depth()
    om = params.omega
    hbar, mass = params.hbar, params.mass
    l2 = params.magnetic_length ** 2
    pi_product = 2.0 * mass * om * hbar * ladder_matrix("pi_plus", spec).entries
    x_product = 2.0 * l2 * (ladder_matrix("x_minus", spec).entries
                            @ ladder_matrix("x_plus", spec).entries)
    ident = np.eye(K + 1, dtype=np.complex128)
    h = 0.5 * (pi_product / (2.0 * mass) * (1.0 + params.omega_c / om)
               + 0.5 * mass * om * om * (1.0 - params.omega_c / om) * x_product
               + hbar * om * ident)
    return OperatorMatrix(h, 0, label="hamiltonian(ladder route)")

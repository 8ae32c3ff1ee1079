"""Coherent states on a fixed angular-momentum sector: lowering-operator
eigenstates labeled by a complex number, their overlap kernel, photon
statistics, label dynamics, and the associated entire-function representation.

Amplitudes in the nu-basis are
    a_nu = |z|^(m/2) z^nu / (sqrt(I_m(2|z|)) sqrt(nu! (nu+m)!)),
always assembled in log space.  Every overlap is evaluated through the
single-valued series in w = conj(z') z,
    sum_nu w^nu / (nu! (nu+m)!),
so no fractional power of a complex argument is ever taken: the kernel is
branch-free by construction and the Cauchy-Schwarz bound |<z'|z>| <= 1 holds
with equality exactly on the diagonal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .fock import PhysicalParams, SubspaceSpec
from .measure import QuadratureGrid, integrate
from .specfun import (
    DomainError,
    bessel_i_reduced,
    bessel_i_scaled,
    ln_factorial,
)

_TWO_PI = 2.0 * math.pi
DEFAULT_TAIL_TOL = 1e-16

# reduced-series vs scaled-Bessel switchover radius for mean-value ratios
_RATIO_SWITCH = 40.0


@dataclass(frozen=True)
class CoherentLabel:
    """Complex label z with canonical polar data.

    rho and phi are derived on construction; from_polar stores the supplied
    modulus verbatim so that pure phase rotations preserve every
    modulus-dependent quantity bit-for-bit.
    """

    re: float = 0.0
    im: float = 0.0
    rho: float = field(init=False, repr=False)
    phi: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError("label components must be finite")
        object.__setattr__(self, "rho", math.hypot(self.re, self.im))
        object.__setattr__(self, "phi", math.atan2(self.im, self.re) % _TWO_PI)

    @classmethod
    def from_complex(cls, z: complex) -> "CoherentLabel":
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    @classmethod
    def from_polar(cls, rho: float, phi: float) -> "CoherentLabel":
        if not (math.isfinite(rho) and rho >= 0.0):
            raise DomainError(f"modulus must be finite and >= 0, got {rho}")
        phi = float(phi) % _TWO_PI
        label = cls(re=rho * math.cos(phi), im=rho * math.sin(phi))
        object.__setattr__(label, "rho", float(rho))
        object.__setattr__(label, "phi", phi)
        return label

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


def _as_label(label) -> CoherentLabel:
    if isinstance(label, CoherentLabel):
        return label
    return CoherentLabel.from_complex(label)


@dataclass(frozen=True)
class StateVector:
    """Truncated amplitude vector on one m sector.

    Norm may not exceed 1 (up to 1e-12 roundoff headroom); a tail_tol records
    the auto-depth stopping criterion the vector was built under, enforced on
    the last amplitude.
    """

    m: int
    amplitudes: np.ndarray
    label: CoherentLabel | None = None
    tail_tol: float | None = None

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("amplitudes must be a nonempty 1-d array")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got {self.m}")
        norm = math.fsum(float(x) for x in (a.real ** 2 + a.imag ** 2))
        if norm > 1.0 + 1e-12:
            raise ValueError(f"amplitude norm {norm} exceeds 1")
        if self.tail_tol is not None:
            last = abs(a[-1]) ** 2
            if last >= self.tail_tol:
                raise ValueError(
                    f"tail amplitude |a_K|^2 = {last:.3e} above tolerance")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @property
    def depth(self) -> int:
        return self.amplitudes.size - 1

    @property
    def norm_sq(self) -> float:
        a = self.amplitudes
        return math.fsum(float(x) for x in (a.real ** 2 + a.imag ** 2))


def _ln_bessel_i(m: int, r: float) -> float:
    # log of I_m(2r) without overflow or small-argument underflow
    if r <= _RATIO_SWITCH:
        return m * math.log(r) + math.log(bessel_i_reduced(m, r * r).real)
    return math.log(bessel_i_scaled(m, 2.0 * r)) + 2.0 * r


def _ln_amplitude(m: int, r: float, nu: int, ln_i: float) -> float:
    return (0.5 * m + nu) * math.log(r) - 0.5 * ln_i \
        - 0.5 * (ln_factorial(nu) + ln_factorial(nu + m))


def _auto_depth(m: int, r: float, tail_tol: float, ln_i: float) -> int:
    depth = max(30, math.ceil(2.0 * math.e * r) + math.ceil(10.0 * math.sqrt(r + 1.0)))
    while 2.0 * _ln_amplitude(m, r, depth, ln_i) >= math.log(tail_tol):
        depth += 16
        if depth > 200_000:
            raise DomainError("auto depth selection diverged")
    return depth


def bgcs_state(label, spec: SubspaceSpec,
               tail_tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Lowering-operator eigenstate with eigenvalue label.z on sector spec.m.

    With spec.depth None the truncation is chosen from the Poisson-like tail
    of the nu distribution and then extended until the last probability drops
    below tail_tol; an explicit depth is honored as given (without the tail
    guarantee).
    """
    label = _as_label(label)
    m = spec.m
    r = label.rho
    if r == 0.0:
        depth = spec.depth if spec.depth is not None else 30
        amps = np.zeros(depth + 1, dtype=np.complex128)
        amps[0] = 1.0
        return StateVector(m=m, amplitudes=amps, label=label,
                           tail_tol=tail_tol if spec.depth is None else None)
    ln_i = _ln_bessel_i(m, r)
    if spec.depth is None:
        depth = _auto_depth(m, r, tail_tol, ln_i)
        checked = tail_tol
    else:
        depth = spec.depth
        checked = None
    nu = np.arange(depth + 1)
    ln_mag = np.array([_ln_amplitude(m, r, k, ln_i) for k in range(depth + 1)])
    amps = np.exp(ln_mag) * np.exp(1j * label.phi * nu)
    return StateVector(m=m, amplitudes=amps, label=label, tail_tol=checked)


def probability_density(label, m: int, nu: int) -> float:
    """Closed-form occupation probability |z|^(2 nu + m)/(I_m(2|z|) nu! (nu+m)!)."""
    if nu < 0:
        raise DomainError(f"nu must be >= 0, got {nu}")
    label = _as_label(label)
    r = label.rho
    if r == 0.0:
        return 1.0 if nu == 0 else 0.0
    return math.exp(2.0 * _ln_amplitude(m, r, nu, _ln_bessel_i(m, r)))


# ------------------------------------------------------------------ kernel

def reduced_series_matrix(m: int, w: np.ndarray) -> np.ndarray:
    """Vectorized sum_nu w^nu/(nu! (nu+m)!) for an array of arguments.

    Plain float64 accumulation: the quadrature consumers need ~1e-8, far
    above the eps * n_terms error of the uncompensated sum.
    """
    w = np.asarray(w, dtype=np.complex128)
    wmax = float(np.max(np.abs(w))) if w.size else 0.0
    terms = max(40, int(3.0 * math.sqrt(wmax)) + 30)
    lead = math.exp(-ln_factorial(m))
    acc = np.full_like(w, lead)
    term = np.full_like(w, lead)
    for k in range(1, terms + 1):
        term = term * w / (k * (k + m))
        acc = acc + term
    return acc


def overlap(zp, z, m: int) -> complex:
    """Inner product of the state labeled zp (bra) with the one labeled z (ket).

    Equal to S_m(conj(zp) z) / sqrt(S_m(|zp|^2) S_m(|z|^2)) where S_m is the
    entire series sum_nu w^nu/(nu!(nu+m)!); all fractional-power prefactors
    cancel identically in this form.
    """
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    zp, z = _as_label(zp), _as_label(z)
    num = bessel_i_reduced(m, zp.z.conjugate() * z.z)
    d1 = bessel_i_reduced(m, zp.rho * zp.rho).real
    d2 = bessel_i_reduced(m, z.rho * z.rho).real
    return num / math.sqrt(d1 * d2)


def kernel_idempotence_check(z, zp, m: int, grid: QuadratureGrid) -> float:
    """|quadrature of K(z,u) K(u,zp) du - K(z,zp)|: the reproducing-kernel
    self-consistency residual on the given grid."""
    z, zp = _as_label(z), _as_label(zp)
    dz = bessel_i_reduced(m, z.rho * z.rho).real
    dzp = bessel_i_reduced(m, zp.rho * zp.rho).real
    zc = z.z.conjugate()
    zpv = zp.z

    def integrand(u):
        left = reduced_series_matrix(m, zc * u)
        right = reduced_series_matrix(m, np.conj(u) * zpv)
        mid = reduced_series_matrix(m, np.abs(u) ** 2).real
        return left * right / (mid * math.sqrt(dz * dzp))

    quad = integrate(integrand, m, grid, vectorized=True)
    return abs(quad - overlap(z, zp, m))


# ------------------------------------------------------- photon statistics

def _bessel_step_ratio(m: int, r: float) -> float:
    # |z| I_{m+1}(2|z|) / I_m(2|z|)
    if r == 0.0:
        return 0.0
    if r <= _RATIO_SWITCH:
        x = r * r
        return x * bessel_i_reduced(m + 1, x).real / bessel_i_reduced(m, x).real
    return r * bessel_i_scaled(m + 1, 2.0 * r) / bessel_i_scaled(m, 2.0 * r)


def _bessel_double_step_ratio(m: int, r: float) -> float:
    # |z|^2 I_{m+2}(2|z|) / I_m(2|z|)
    if r == 0.0:
        return 0.0
    if r <= _RATIO_SWITCH:
        x = r * r
        return x * x * bessel_i_reduced(m + 2, x).real / bessel_i_reduced(m, x).real
    return r * r * bessel_i_scaled(m + 2, 2.0 * r) / bessel_i_scaled(m, 2.0 * r)


def mean_n(label, m: int) -> float:
    """Mean radial quantum number |z| I_{m+1}(2|z|)/I_m(2|z|)."""
    return _bessel_step_ratio(m, _as_label(label).rho)


def mean_n_sq(label, m: int) -> float:
    """Second moment |z|^2 I_{m+2}/I_m + |z| I_{m+1}/I_m."""
    r = _as_label(label).rho
    return _bessel_double_step_ratio(m, r) + _bessel_step_ratio(m, r)


def mean_k3(label, m: int) -> float:
    """Mean of the diagonal su(1,1) generator: mean_n + (m+1)/2."""
    return mean_n(label, m) + 0.5 * (m + 1)


def mean_k3_sq(label, m: int) -> float:
    """Second moment of the diagonal generator:
    |z|^2 I_{m+2}/I_m + (m+2)|z| I_{m+1}/I_m + ((m+1)/2)^2."""
    r = _as_label(label).rho
    return _bessel_double_step_ratio(m, r) \
        + (m + 2) * _bessel_step_ratio(m, r) + (0.5 * (m + 1)) ** 2


def g2(label, m: int) -> float:
    """Intensity correlation I_m I_{m+2} / I_{m+1}^2 at argument 2|z|.

    Finite at z = 0 with value (m+1)/(m+2); approaches 1 from below as
    |z| grows (always sub-Poissonian).
    """
    r = _as_label(label).rho
    if r <= _RATIO_SWITCH:
        x = r * r
        return bessel_i_reduced(m, x).real * bessel_i_reduced(m + 2, x).real \
            / bessel_i_reduced(m + 1, x).real ** 2
    return bessel_i_scaled(m, 2.0 * r) * bessel_i_scaled(m + 2, 2.0 * r) \
        / bessel_i_scaled(m + 1, 2.0 * r) ** 2


def mandel_q(label, m: int) -> float:
    """(variance - mean)/mean of the radial quantum number; <= 0 here.

    Assembled as (R2 - R1^2)/R1 from the two Bessel ratios, which is free of
    the catastrophic cancellation the literal moment difference would incur
    at small |z|."""
    r = _as_label(label).rho
    if r == 0.0:
        raise DomainError("Mandel parameter undefined at z = 0 (zero mean)")
    r1 = _bessel_step_ratio(m, r)
    r2 = _bessel_double_step_ratio(m, r)
    return (r2 - r1 * r1) / r1


def fano(label, m: int) -> float:
    """Noise-to-signal variance ratio: mandel_q + 1."""
    return mandel_q(label, m) + 1.0


def snr(label, m: int, use_q_coordinate: bool = True) -> float:
    """Signal-to-noise ratio 2|z|^2 cos^2(phi)/mean_k3 of the dimensionless
    position quadrature (sin^2 for the conjugate momentum quadrature)."""
    label = _as_label(label)
    trig = math.cos(label.phi) if use_q_coordinate else math.sin(label.phi)
    return 2.0 * label.rho ** 2 * trig * trig / mean_k3(label, m)


# ------------------------------------------------------------------ dynamics

def evolve_label(label, t: float, params: PhysicalParams,
                 rate: float | None = None) -> CoherentLabel:
    """Rotate the label at the slow frequency: z -> z e^{-i (Omega-omega_c) t / 2}.

    The modulus is carried over exactly, so every |z|-only observable is
    preserved bit-for-bit along the orbit.  rate overrides the default
    angular velocity (Omega - omega_c)/2 when exploring alternatives.
    """
    label = _as_label(label)
    if rate is None:
        rate = params.omega_minus
    return CoherentLabel.from_polar(label.rho, label.phi - rate * t)


def overlap_density(z, z0, m: int) -> float:
    """Squared kernel |<z|z0>|^2, the localization profile of the state z0
    as seen through the coherent family."""
    return abs(overlap(z, z0, m)) ** 2


# ---------------------------------------------------------- entire function

def analytic_function(state: StateVector, z: complex) -> complex:
    """Entire-series representative f(z) = sum_nu a_nu z^nu / sqrt(nu!(nu+m)!).

    Under the reproducing measure, sector inner products become weighted
    integrals of these functions: <s1|s2> = int dmeasure (|z|^m / I_m(2|z|))
    conj(f1(conj(z))) f2(conj(z)).
    """
    m = state.m
    coeff = state.amplitudes * np.exp(
        -0.5 * np.array([ln_factorial(k) + ln_factorial(k + m)
                         for k in range(state.amplitudes.size)]))
    acc = 0.0 + 0.0j
    for c in coeff[::-1]:
        acc = acc * z + c
    return acc


def analytic_weight(r: float, m: int) -> float:
    """Weight |z|^m / I_m(2|z|) pairing entire representatives under the
    reproducing measure."""
    if r == 0.0:
        return float(math.factorial(m)) if m <= 170 else math.exp(ln_factorial(m))
    return math.exp(m * math.log(r) - _ln_bessel_i(m, r))

"""Anti-normal (coherent-state) quantization of phase-space symbols against
the Bessel-measure family: closed-form ladder matrices, the independent
quadrature route A_f[nu, up] = int f(z) a_nu(z) conj(a_up(z)) dmeasure, and
the operator-identity reports for the quantized energy symbol.

Matrix identities are always asserted on the interior block (excluding the
last few rows/columns), because a projected product like Q @ Q necessarily
loses the contributions that pass through basis states above the truncation.
Identity reports run their matrix algebra in 80-bit extended precision so the
1e-12 interior claims are not eaten by double-rounding of entries ~ depth^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bgcs import CoherentLabel, _as_label, bgcs_state, mean_k3
from .fock import OperatorMatrix, SubspaceSpec, adjoint
from .measure import QuadratureGrid, integrate

NAMED_SYMBOLS = ("z", "z_bar", "z_sq", "z_bar_sq", "abs_z_sq",
                 "q", "p", "q_sq", "p_sq")

# (power of z, power of conj z) per named polynomial symbol; q = (z + conj z)/sqrt2
_NAMED_DEGREE = {"z": 1, "z_bar": 1, "z_sq": 2, "z_bar_sq": 2, "abs_z_sq": 2,
                 "q": 1, "p": 1, "q_sq": 2, "p_sq": 2}

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SymbolSpec:
    """A phase-space function to quantize.

    Either one of the named tags, or tag='custom' with terms as a tuple of
    (power_of_z, power_of_conj_z, coefficient).  Custom symbols only support
    the quadrature route.
    """

    tag: str
    terms: tuple[tuple[int, int, complex], ...] | None = None

    def __post_init__(self):
        if self.tag == "custom":
            if not self.terms:
                raise ValueError("custom symbol needs at least one term")
            for i, j, _ in self.terms:
                if i < 0 or j < 0:
                    raise ValueError("custom powers must be non-negative")
        elif self.tag not in NAMED_SYMBOLS:
            raise ValueError(
                f"unknown symbol {self.tag!r}; expected one of {NAMED_SYMBOLS} or 'custom'")
        elif self.terms is not None:
            raise ValueError("named symbols take no custom terms")

    @property
    def degree(self) -> int:
        if self.tag == "custom":
            return max(i + j for i, j, _ in self.terms)
        return _NAMED_DEGREE[self.tag]

    def evaluate(self, z):
        """Pointwise symbol value on a complex scalar or array."""
        z = np.asarray(z, dtype=np.complex128)
        zc = np.conj(z)
        if self.tag == "z":
            return z
        if self.tag == "z_bar":
            return zc
        if self.tag == "z_sq":
            return z * z
        if self.tag == "z_bar_sq":
            return zc * zc
        if self.tag == "abs_z_sq":
            return (z * zc).real.astype(np.complex128)
        if self.tag == "q":
            return (z + zc) / _SQRT2
        if self.tag == "p":
            return (z - zc) / (1j * _SQRT2)
        if self.tag == "q_sq":
            return ((z + zc) / _SQRT2) ** 2
        if self.tag == "p_sq":
            return ((z - zc) / (1j * _SQRT2)) ** 2
        acc = np.zeros_like(z)
        for i, j, c in self.terms:
            acc = acc + c * z ** i * zc ** j
        return acc


# ------------------------------------------------------------- closed forms

def _lowering_array(m: int, dim: int, dtype) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=dtype)
    for nu in range(dim - 1):
        a[nu, nu + 1] = np.sqrt(np.asarray((nu + 1) * (m + nu + 1), dtype=dtype))
    return a


def _double_lowering_array(m: int, dim: int, dtype) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=dtype)
    for nu in range(dim - 2):
        a[nu, nu + 2] = np.sqrt(np.asarray(
            (nu + 2) * (m + nu + 2) * (nu + 1) * (m + nu + 1), dtype=dtype))
    return a


def _energy_diag_array(m: int, dim: int, dtype) -> np.ndarray:
    return np.diag(np.asarray([(nu + 1) * (m + nu + 1) for nu in range(dim)],
                              dtype=dtype))


def quantize_closed_form(sym: SymbolSpec, spec: SubspaceSpec) -> OperatorMatrix:
    """Ladder-form matrix of the quantized named symbol on the m sector.

    The quantized plain symbol acts as a shifted lowering operator with
    entries <nu| . |nu+1> = sqrt((nu+1)(m+nu+1)); everything else is built
    from it: conjugate = adjoint, quadratics from the natural combinations,
    and the modulus-squared symbol is exactly diagonal (nu+1)(m+nu+1).
    """
    if sym.tag == "custom":
        raise ValueError("custom symbols are quantized by quadrature only")
    dim = spec.require_depth() + 1
    m = spec.m
    az = _lowering_array(m, dim, np.float64).astype(np.complex128)
    if sym.tag == "z":
        return OperatorMatrix(az, 1, label="quantized z")
    if sym.tag == "z_bar":
        return OperatorMatrix(az.T, 1, label="quantized conj(z)")
    if sym.tag == "q":
        return OperatorMatrix((az + az.T) / _SQRT2, 1, label="quantized q")
    if sym.tag == "p":
        return OperatorMatrix((az - az.T) / (1j * _SQRT2), 1, label="quantized p")
    if sym.tag == "abs_z_sq":
        ent = _energy_diag_array(m, dim, np.float64).astype(np.complex128)
        return OperatorMatrix(ent, 0, label="quantized |z|^2")
    a2 = _double_lowering_array(m, dim, np.float64).astype(np.complex128)
    if sym.tag == "z_sq":
        return OperatorMatrix(a2, 2, label="quantized z^2")
    if sym.tag == "z_bar_sq":
        return OperatorMatrix(a2.T, 2, label="quantized conj(z)^2")
    diag = _energy_diag_array(m, dim, np.float64).astype(np.complex128)
    if sym.tag == "q_sq":
        return OperatorMatrix(diag + 0.5 * (a2 + a2.T), 2, label="quantized q^2")
    return OperatorMatrix(diag - 0.5 * (a2 + a2.T), 2, label="quantized p^2")


# --------------------------------------------------------- quadrature route

def quantize_by_quadrature(sym: SymbolSpec, spec: SubspaceSpec,
                           grid: QuadratureGrid) -> OperatorMatrix:
    """Matrix of the quantized symbol assembled entry by entry through the
    measure-weighted quadrature of f(z) a_nu(z) conj(a_up(z))."""
    depth = spec.require_depth()
    m = spec.m
    need_degree = 2 * depth + m + sym.degree + 1
    if grid.max_degree < need_degree:
        raise ValueError(
            f"grid supports degree {grid.max_degree}, symbol needs {need_degree}")
    need_mode = depth + sym.degree
    if grid.max_mode < need_mode:
        raise ValueError(
            f"grid resolves modes to {grid.max_mode}, symbol needs {need_mode}")

    amp = np.empty((grid.nodes.size, depth + 1))
    for i, r in enumerate(grid.nodes):
        amp[i] = bgcs_state(CoherentLabel(re=float(r), im=0.0), spec).amplitudes.real

    dim = depth + 1
    entries = np.empty((dim, dim), dtype=np.complex128)
    for nu in range(dim):
        for up in range(dim):
            a_nu = amp[:, nu][:, None]
            a_up = amp[:, up][:, None]

            def integrand(z, k=nu - up, a_nu=a_nu, a_up=a_up):
                return sym.evaluate(z) * a_nu * a_up * np.exp(1j * k * np.angle(z))

            entries[nu, up] = integrate(integrand, m, grid, vectorized=True)
    return OperatorMatrix(entries, dim - 1, label=f"quadrature({sym.tag})")


# ------------------------------------------------------------- mean values

def mean_matrix(op: OperatorMatrix, amplitudes: np.ndarray) -> complex:
    """Expectation <v|A|v> of a truncated operator in a given amplitude vector."""
    v = np.asarray(amplitudes, dtype=np.complex128)
    if v.size != op.dim:
        raise ValueError(f"vector length {v.size} does not match matrix dim {op.dim}")
    return complex(np.vdot(v, op.entries @ v))


def mean_values_on_bgcs(sym: SymbolSpec, label, m: int) -> complex:
    """Expectation of the quantized symbol in the coherent state with the
    given label, via the matrix route at automatic depth."""
    label = _as_label(label)
    state = bgcs_state(label, SubspaceSpec(m))
    op = quantize_closed_form(sym, SubspaceSpec(m, depth=max(state.depth, 8)))
    v = np.zeros(op.dim, dtype=np.complex128)
    v[:state.amplitudes.size] = state.amplitudes
    return mean_matrix(op, v)


def dispersions(label, m: int) -> tuple[float, float, float]:
    """Closed-form quadrature-coordinate variances: both equal the mean of
    the diagonal su(1,1) generator; the third slot is their product."""
    k3 = mean_k3(label, m)
    return k3, k3, k3 * k3


def dispersions_matrix_route(label, m: int) -> tuple[float, float]:
    """Variances via explicit operator squares in the truncated matrix
    algebra, as an independent check on the closed form."""
    label = _as_label(label)
    state = bgcs_state(label, SubspaceSpec(m))
    spec = SubspaceSpec(m, depth=max(state.depth, 8))
    q = quantize_closed_form(SymbolSpec("q"), spec)
    p = quantize_closed_form(SymbolSpec("p"), spec)
    v = np.zeros(spec.depth + 1, dtype=np.complex128)
    v[:state.amplitudes.size] = state.amplitudes
    out = []
    for op in (q, p):
        first = np.vdot(v, op.entries @ v)
        second = np.vdot(v, op.entries @ (op.entries @ v))
        out.append(float((second - first * first).real))
    return out[0], out[1]


# ----------------------------------------------------------------- reports

@dataclass(frozen=True)
class MatrixEntry:
    row: int
    col: int
    value: float

    def as_dict(self):
        return {"row": self.row, "col": self.col, "value": self.value}


@dataclass(frozen=True)
class DecompositionReport:
    """Ground-truth residuals of the quantized-energy operator identities.

    residual_q/p are A_{q^2} - Q^2 - D and A_{p^2} - P^2 - D with
    D = (1/2)[A_z, A_zbar]; entries lists every interior element above
    1e-12.  The boundary-projector hypothesis (a single (2,0) element of
    size sqrt((m+1)(m+2)/2), with opposite signs for the two residuals) is
    evaluated against the computed matrices rather than assumed.
    """

    m: int
    depth: int
    interior: int
    energy_split_max_err: float
    symmetric_sum_max_err: float
    residual_q_entries: tuple[MatrixEntry, ...]
    residual_p_entries: tuple[MatrixEntry, ...]
    max_interior_residual_q: float
    max_interior_residual_p: float
    edge_residual_q: float
    claimed_entry: tuple[int, int]
    claimed_coefficient: float
    computed_at_claimed_entry_q: float
    matches_claimed_projectors: bool

    def as_dict(self):
        return {
            "m": self.m, "depth": self.depth, "interior": self.interior,
            "energy_split_max_err": self.energy_split_max_err,
            "symmetric_sum_max_err": self.symmetric_sum_max_err,
            "residual_q_entries": [e.as_dict() for e in self.residual_q_entries],
            "residual_p_entries": [e.as_dict() for e in self.residual_p_entries],
            "max_interior_residual_q": self.max_interior_residual_q,
            "max_interior_residual_p": self.max_interior_residual_p,
            "edge_residual_q": self.edge_residual_q,
            "claimed_entry": list(self.claimed_entry),
            "claimed_coefficient": self.claimed_coefficient,
            "computed_at_claimed_entry_q": self.computed_at_claimed_entry_q,
            "matches_claimed_projectors": self.matches_claimed_projectors,
        }


def _interior(a: np.ndarray, margin: int) -> np.ndarray:
    return a[:a.shape[0] - margin, :a.shape[1] - margin]


def energy_operator_decomposition_check(m: int, spec: SubspaceSpec) -> DecompositionReport:
    """Brute-force the quantized-energy operator identities on sector m.

    All products run in 80-bit extended precision.  In the untruncated
    algebra the squared-coordinate residuals vanish identically (the
    quantized z^2 equals the square of the quantized z, entry by entry); the
    report records what the matrices actually say, and separately whether
    that matches the claimed extra single-entry projector corrections.
    """
    depth = spec.require_depth()
    if depth < 8:
        raise ValueError("decomposition check needs depth >= 8")
    dim = depth + 1
    az = _lowering_array(m, dim, np.longdouble)
    a2 = _double_lowering_array(m, dim, np.longdouble)
    diag = _energy_diag_array(m, dim, np.longdouble)
    azb = az.T
    comm_half = (az @ azb - azb @ az) / np.longdouble(2)

    q_sq_matrix = 0.5 * (az @ az + azb @ azb + az @ azb + azb @ az)
    p_sq_matrix = -0.5 * (az @ az + azb @ azb - az @ azb - azb @ az)
    a_qsq = diag + 0.5 * (a2 + a2.T)
    a_psq = diag - 0.5 * (a2 + a2.T)

    margin = 2
    energy_split = diag - 0.5 * (q_sq_matrix + p_sq_matrix) - comm_half
    resid_q = a_qsq - q_sq_matrix - comm_half
    resid_p = a_psq - p_sq_matrix - comm_half
    sym_sum = (resid_q + resid_p) - 2.0 * energy_split

    def collect(a):
        inner = _interior(a, margin)
        out = []
        for r, c in np.argwhere(np.abs(inner) > 1e-12):
            out.append(MatrixEntry(int(r), int(c), float(inner[r, c])))
        return tuple(out), float(np.max(np.abs(inner)))

    q_entries, q_max = collect(resid_q)
    p_entries, p_max = collect(resid_p)
    claimed = math.sqrt((m + 1) * (m + 2) / 2.0)
    at_claimed = float(resid_q[2, 0])
    return DecompositionReport(
        m=m, depth=depth, interior=dim - margin,
        energy_split_max_err=float(np.max(np.abs(_interior(energy_split, margin)))),
        symmetric_sum_max_err=float(np.max(np.abs(_interior(sym_sum, margin)))),
        residual_q_entries=q_entries,
        residual_p_entries=p_entries,
        max_interior_residual_q=q_max,
        max_interior_residual_p=p_max,
        edge_residual_q=float(np.max(np.abs(resid_q))),
        claimed_entry=(2, 0),
        claimed_coefficient=claimed,
        computed_at_claimed_entry_q=at_claimed,
        matches_claimed_projectors=abs(at_claimed - claimed) < 1e-9,
    )


@dataclass(frozen=True)
class CommutatorCheck:
    name: str
    max_interior_err: float
    example_entry: tuple[int, int]
    example_value: float
    expected_value: float

    def as_dict(self):
        return {"name": self.name, "max_interior_err": self.max_interior_err,
                "example_entry": list(self.example_entry),
                "example_value": self.example_value,
                "expected_value": self.expected_value}


@dataclass(frozen=True)
class CommutatorReport:
    m: int
    depth: int
    checks: tuple[CommutatorCheck, ...] = field(default_factory=tuple)

    @property
    def max_err(self) -> float:
        return max(c.max_interior_err for c in self.checks)

    def as_dict(self):
        return {"m": self.m, "depth": self.depth,
                "max_err": self.max_err,
                "checks": [c.as_dict() for c in self.checks]}


def energy_commutators(m: int, spec: SubspaceSpec) -> CommutatorReport:
    """Commutators of the quantized energy with the four plain power symbols,
    matrix algebra vs banded closed forms, on the interior block."""
    depth = spec.require_depth()
    if depth < 6:
        raise ValueError("commutator check needs depth >= 6")
    dim = depth + 1
    az = _lowering_array(m, dim, np.longdouble)
    a2 = _double_lowering_array(m, dim, np.longdouble)
    diag = _energy_diag_array(m, dim, np.longdouble)

    def super_band(offset, coeff):
        a = np.zeros((dim, dim), dtype=np.longdouble)
        for nu in range(dim - offset):
            a[nu, nu + offset] = coeff(nu)
        return a

    ld = np.longdouble
    closed_z = -super_band(1, lambda nu: ld(2 * nu + m + 3)
                           * np.sqrt(ld((nu + 1) * (m + nu + 1))))
    # coefficient indexed by the row: entry (nu, nu-1) carries (2 nu + m + 1)
    closed_zb = np.zeros((dim, dim), dtype=np.longdouble)
    for nu in range(1, dim):
        closed_zb[nu, nu - 1] = ld(2 * nu + m + 1) * np.sqrt(ld(nu * (m + nu)))
    closed_z2 = -2.0 * super_band(2, lambda nu: ld(2 * nu + m + 4) * np.sqrt(
        ld((nu + 2) * (m + nu + 2) * (nu + 1) * (m + nu + 1))))
    closed_zb2 = -closed_z2.T

    cases = [
        ("[abs_z_sq, z]", az, closed_z, 2, (0, 1)),
        ("[abs_z_sq, z_bar]", az.T, closed_zb, 2, (2, 1)),
        ("[abs_z_sq, z_sq]", a2, closed_z2, 3, (0, 2)),
        ("[abs_z_sq, z_bar_sq]", a2.T, closed_zb2, 3, (2, 0)),
    ]
    checks = []
    for name, other, closed, margin, example in cases:
        comm = diag @ other - other @ diag
        err = float(np.max(np.abs(_interior(comm - closed, margin))))
        checks.append(CommutatorCheck(
            name=name, max_interior_err=err, example_entry=example,
            example_value=float(comm[example]),
            expected_value=float(closed[example])))
    return CommutatorReport(m=m, depth=depth, checks=tuple(checks))

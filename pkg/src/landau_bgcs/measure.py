"""Complex-plane quadrature against the Bessel-product measure
(2/pi) I_m(2|z|) K_m(2|z|) d^2 z.

The radial direction uses composite Gauss-Legendre panels on (0, R] with a
geometrically graded first panel (the weight has a log singularity at the
origin for m = 0 and steep power behavior for larger m); the angular
direction uses the uniform trapezoid rule, which is spectrally exact for
trigonometric polynomials below the node count.  Integration is deterministic:
fixed radial-then-angular order with pairwise reductions, so identical inputs
give bit-identical results.

Note the plane carries infinite total mass under this measure: the radial
density (2/pi) I_m K_m r tends to the constant 1/(2 pi), exactly as for the
standard Glauber d^2alpha/pi case.  What is finite, and what the grid is
built to resolve, are the per-mode moments 4 int r^(2n-m+1) K_m(2r) dr =
Gamma(n-m+1) Gamma(n+1) underlying the resolution of the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import SubspaceSpec
from .specfun import (
    DomainError,
    EvaluationError,
    bessel_i,
    bessel_i_scaled,
    bessel_k,
    bessel_k_scaled,
    ln_factorial,
)

_TWO_PI = 2.0 * math.pi


def _label_radius(label) -> float:
    rho = getattr(label, "rho", None)
    if rho is not None:
        return float(rho)
    return abs(complex(label))


def measure_density(label, m: int) -> float:
    """Density (2/pi) I_m(2|z|) K_m(2|z|) of the reproducing measure.

    Accepts a coherent label, a complex number, or a radius.  Uses scaled
    Bessel products beyond |z| = 40 where the plain factors would lose
    accuracy; at |z| = 0 the product limit is 1/(2m) for m >= 1 and the
    m = 0 density diverges logarithmically (returned as inf).
    """
    if m < 0:
        raise DomainError(f"order must be >= 0, got {m}")
    r = _label_radius(label)
    if r == 0.0:
        return math.inf if m == 0 else 1.0 / (math.pi * m)
    x = 2.0 * r
    if r > 40.0:
        val = bessel_i_scaled(m, x) * bessel_k_scaled(m, x)
    else:
        val = bessel_i(m, x) * bessel_k(m, x)
    return (2.0 / math.pi) * val


@dataclass(frozen=True)
class QuadratureGrid:
    """Radial nodes/weights plus uniform angular sampling.

    nodes are strictly increasing points in (0, cutoff]; weights are plain
    dr-weights (the r dr dphi area Jacobian is applied by integrate, not
    stored here, so the same weights serve one-dimensional radial moments).
    max_degree and max_mode declare the polynomial degree and Fourier mode
    content the grid guarantees to resolve.
    """

    nodes: np.ndarray
    weights: np.ndarray
    cutoff: float
    n_angular: int
    max_degree: int
    max_mode: int
    tail_tol: float = 1e-12

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be matching 1-d arrays")
        if not np.all(weights > 0.0):
            raise ValueError("all quadrature weights must be positive")
        if not (np.all(nodes > 0.0) and np.all(np.diff(nodes) > 0.0)):
            raise ValueError("nodes must be strictly increasing and positive")
        if nodes[-1] > self.cutoff * (1.0 + 1e-12):
            raise ValueError("nodes exceed the declared cutoff radius")
        if self.n_angular <= 2 * self.max_mode:
            raise ValueError(
                f"n_angular = {self.n_angular} cannot resolve modes up to {self.max_mode}")
        if not 0.0 < self.tail_tol < 1e-3:
            raise ValueError(f"tail_tol out of range: {self.tail_tol}")
        if _ln_relative_tail(self.cutoff, self.max_degree) > math.log(self.tail_tol):
            raise ValueError(
                f"cutoff {self.cutoff} too small for degree {self.max_degree} "
                f"at tail tolerance {self.tail_tol}")
        nodes = nodes.copy()
        weights = weights.copy()
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def angles(self) -> np.ndarray:
        return _TWO_PI * np.arange(self.n_angular) / self.n_angular


def _ln_relative_tail(radius: float, degree: int) -> float:
    # tail of int_R^inf r^p K(2r) dr bounded by R^p e^{-2R}, measured against
    # the smallest Gamma-moment of that degree; an absolute R^p e^{-2R} bound
    # is unsatisfiable once p exceeds ~25 and would over-demand the cutoff
    half = max((degree + 1) // 2 - 1, 0)
    ln_target = 2.0 * ln_factorial(half)
    return degree * math.log(radius) - 2.0 * radius - ln_target


def _required_cutoff(degree: int, z_max: float, tail_tol: float) -> float:
    r = max(30.0, z_max + 15.0, 0.5 * degree + 10.0)
    ln_tol = math.log(tail_tol)
    while _ln_relative_tail(r, degree) > ln_tol:
        r += 2.0
        if r > 600.0:
            raise DomainError(
                f"cannot satisfy tail tolerance {tail_tol} at degree {degree}")
    return r


@lru_cache(maxsize=8)
def _panel_rule(points: int):
    x, w = np.polynomial.legendre.leggauss(points)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def build_grid(max_degree: int = 24,
               max_mode: int = 32,
               z_max: float = 0.0,
               cutoff: float | None = None,
               panel_width: float = 2.0,
               points_per_panel: int = 32,
               n_angular: int | None = None,
               grading_levels: int = 8,
               grading_ratio: float = 4.0,
               tail_tol: float = 1e-12) -> QuadratureGrid:
    """Build the composite radial rule and angular sampling.

    The first panel [0, panel_width] is subdivided geometrically toward the
    origin (grading_levels intervals shrinking by grading_ratio) so the
    near-origin weight behavior is captured without ever placing a node at
    r = 0; the rest of [0, R] uses uniform panels of panel_width.
    """
    if max_degree < 0 or max_mode < 0:
        raise ValueError("max_degree and max_mode must be >= 0")
    if panel_width <= 0 or points_per_panel < 4:
        raise ValueError("invalid panel geometry")
    if grading_levels < 1 or grading_ratio <= 1.0:
        raise ValueError("invalid grading parameters")
    radius = float(cutoff) if cutoff is not None \
        else _required_cutoff(max_degree, z_max, tail_tol)
    if n_angular is None:
        n_angular = max(256, 4 * max_mode + 8)

    edges = [0.0]
    edges += [panel_width * grading_ratio ** (k - grading_levels)
              for k in range(grading_levels)]
    b = panel_width
    while b < radius - 1e-9:
        b = min(b + panel_width, radius)
        edges.append(b)
    if edges[-1] < radius:
        edges.append(radius)

    xs, ws = _panel_rule(points_per_panel)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        nodes.append(mid + half * xs)
        weights.append(half * ws)
    return QuadratureGrid(nodes=np.concatenate(nodes),
                          weights=np.concatenate(weights),
                          cutoff=radius,
                          n_angular=int(n_angular),
                          max_degree=int(max_degree),
                          max_mode=int(max_mode),
                          tail_tol=tail_tol)


def _density_vector(grid: QuadratureGrid, m: int) -> np.ndarray:
    return np.array([measure_density(r, m) for r in grid.nodes])


def integrate(f, m: int, grid: QuadratureGrid, vectorized: bool = False) -> complex:
    """Integral of f(z) against the order-m measure over the disk of radius R.

    The area element r dr dphi and the measure density are applied here; f
    receives bare complex labels r e^{i phi}.  With vectorized=True, f is
    called once with the full (n_radial, n_angular) complex node matrix and
    must return a like-shaped array.  Summation is angular-first then radial,
    both via pairwise reduction, for run-to-run bit identity.
    """
    z_nodes = grid.nodes[:, None] * np.exp(1j * grid.angles)[None, :]
    if vectorized:
        vals = np.asarray(f(z_nodes), dtype=np.complex128)
        if vals.shape != z_nodes.shape:
            raise ValueError("vectorized integrand returned a wrong shape")
    else:
        vals = np.array([[f(z) for z in row] for row in z_nodes],
                        dtype=np.complex128)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise EvaluationError(
            f"non-finite integrand sample at r = {grid.nodes[i]:.6g}, "
            f"phi = {grid.angles[j]:.6g}")
    angular = vals.sum(axis=1) * (_TWO_PI / grid.n_angular)
    radial_factor = grid.weights * grid.nodes * _density_vector(grid, m)
    return complex((radial_factor * angular).sum())


def radial_moment_check(n: int, m: int, grid: QuadratureGrid) -> float:
    """Relative error of the grid on 4 int r^(2n-m+1) K_m(2r) dr vs the
    Gamma-product Gamma(n-m+1) Gamma(n+1), compared in log space."""
    if not 0 <= m <= n:
        raise DomainError(f"need n >= m >= 0, got n={n}, m={m}")
    p = 2 * n - m + 1
    if p > grid.max_degree:
        raise ValueError(
            f"grid built for degree {grid.max_degree}, moment needs {p}")
    r = grid.nodes
    ln_terms = np.array([math.log(w) + p * math.log(ri)
                         + math.log(bessel_k_scaled(m, 2.0 * ri)) - 2.0 * ri
                         for w, ri in zip(grid.weights, r)])
    peak = ln_terms.max()
    ln_quad = math.log(4.0) + peak + math.log(np.exp(ln_terms - peak).sum())
    ln_target = ln_factorial(n - m) + ln_factorial(n)
    return abs(math.expm1(ln_quad - ln_target))


def resolution_of_identity_check(spec: SubspaceSpec, n_check: int,
                                 grid: QuadratureGrid) -> float:
    """Max deviation from the identity of the quadrature Gram matrix
    M[nu, up] = int a_nu(z) conj(a_up(z)) dmeasure over the first
    n_check+1 coherent-amplitude modes."""
    from .bgcs import CoherentLabel, bgcs_state

    if n_check < 0:
        raise ValueError("n_check must be >= 0")
    if spec.depth is not None and n_check > spec.depth - 2:
        raise ValueError(
            f"n_check = {n_check} needs depth >= {n_check + 2}, have {spec.depth}")
    if grid.max_mode < 2 * n_check:
        raise ValueError(
            f"grid resolves modes up to {grid.max_mode}, need {2 * n_check}")
    need_degree = 2 * n_check + spec.m + 1
    if grid.max_degree < need_degree:
        raise ValueError(
            f"grid built for degree {grid.max_degree}, need {need_degree}")

    nr = grid.nodes.size
    amp = np.empty((nr, n_check + 1))
    for i, r in enumerate(grid.nodes):
        state = bgcs_state(CoherentLabel(re=float(r), im=0.0), spec)
        if state.amplitudes.size < n_check + 1:
            raise ValueError("state depth too small for requested check")
        amp[i] = state.amplitudes[:n_check + 1].real

    radial_factor = grid.weights * grid.nodes * _density_vector(grid, spec.m)
    s = np.einsum("i,ia,ib->ab", radial_factor, amp, amp)
    d = np.arange(n_check + 1)
    # numerically summed angular harmonics: exactly the trapezoid-rule factor
    harmonics = np.exp(1j * np.subtract.outer(d, d)[..., None] * grid.angles)
    g = harmonics.sum(axis=-1) * (_TWO_PI / grid.n_angular)
    matrix = s * g
    return float(np.max(np.abs(matrix - np.eye(n_check + 1))))

"""Self-contained special-function kernels used everywhere else in the package.

Everything here is scalar double-precision arithmetic built from ascending
series, continued fractions, and upward recurrences, with compensated (Kahan)
accumulation in every series loop.  The quantities provided:

* modified Bessel functions of integer order: ``I_m(w)`` for real or complex
  argument, the exponentially scaled ``e^{-x} I_m(x)`` and ``e^x K_m(x)``
  forms for real argument, and ``K_m(x)`` for ``x > 0``,
* the entire reduced series ``R_m(w) = sum_nu w^nu / (nu! (nu+m)!)``, which is
  ``(w)^{-m/2} I_m(2 sqrt(w))`` continued to all complex ``w`` and is the
  single-valued building block for overlap kernels,
* ``ln n!`` (exact cumulative sums up to 256, Stirling beyond),
* the Gauss hypergeometric series ``2F1(a, b; c; x)`` for ``|x| < 1``,
* weighted Bessel-type moment sums used as series oracles for closed-form
  expectation values.

Integer-order ``K_m`` is computed from ``K_0``/``K_1`` (small-argument series
with harmonic-number terms for ``x <= 2``, a Steed-style continued fraction
for ``x > 2``) followed by stable upward recurrence; the order-reflection
formula with a ``sin(m pi)`` denominator is useless at integer order and is
not used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_EULER_GAMMA = 0.5772156649015328606065120900824024
_LN_SQRT_2PI = 0.9189385332046727417803297364056176
_EXACT_LN_FACT_LIMIT = 256


class DomainError(ValueError):
    """Input lies outside the mathematical domain of the requested quantity."""


class EvaluationError(RuntimeError):
    """A series or iterative evaluation failed to converge.

    Attributes
    ----------
    partial : the best estimate accumulated before giving up (may be None).
    terms : number of terms consumed.
    """

    def __init__(self, message, partial=None, terms=0):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


@dataclass(frozen=True)
class SeriesControl:
    """Termination policy for series loops.

    rel_tol is the target relative size of the last accepted term; max_terms
    bounds the loop.  Constraints: 0 < rel_tol < 1e-6 and max_terms >= 64.
    """

    rel_tol: float = 1e-16
    max_terms: int = 2048

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-6):
            raise ValueError(f"rel_tol must lie in (0, 1e-6), got {self.rel_tol}")
        if self.max_terms < 64:
            raise ValueError(f"max_terms must be >= 64, got {self.max_terms}")


_DEFAULT_CONTROL = SeriesControl()


def _control(control):
    return _DEFAULT_CONTROL if control is None else control


# ---------------------------------------------------------------------------
# log-factorial

def _build_exact_ln_fact():
    # cumulative fsum keeps every prefix exactly rounded
    logs = []
    table = [0.0, 0.0]
    for k in range(2, _EXACT_LN_FACT_LIMIT + 1):
        logs.append(math.log(k))
        table.append(math.fsum(logs))
    return table


_LN_FACT_TABLE = _build_exact_ln_fact()


def ln_factorial(n: int) -> float:
    """Natural log of n! for integer n >= 0.

    Exact-summed table through n = 256, Stirling series with 1/n^7 correction
    beyond (error < 1e-24 relative there).
    """
    if n < 0 or n != int(n):
        raise DomainError(f"ln_factorial requires an integer n >= 0, got {n!r}")
    n = int(n)
    if n <= _EXACT_LN_FACT_LIMIT:
        return _LN_FACT_TABLE[n]
    x = float(n)
    inv = 1.0 / x
    inv2 = inv * inv
    corr = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0 \
        - inv * inv2 * inv2 * inv2 / 1680.0
    return (x + 0.5) * math.log(x) - x + _LN_SQRT_2PI + corr


# ---------------------------------------------------------------------------
# modified Bessel I

def _series_i_real(m, x, ctrl):
    # ascending series at fixed order; all terms positive, Kahan compensated
    half = 0.5 * x
    if half == 0.0:
        return 1.0 if m == 0 else 0.0
    if m == 0:
        term = 1.0
    elif m <= 170 and abs(m * math.log(half)) < 700.0:
        term = half ** m / math.factorial(m)
    else:
        lt0 = m * math.log(half) - ln_factorial(m)
        if lt0 < -745.0:
            # leading term underflows but later terms may not: log-space start
            return _series_i_scaled_core(m, x, ctrl)[0] * math.exp(x)
        term = math.exp(lt0)
    s = 0.0
    comp = 0.0
    ratio_num = half * half
    for nu in range(ctrl.max_terms):
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        term *= ratio_num / ((nu + 1.0) * (nu + 1.0 + m))
        if term <= ctrl.rel_tol * s and (nu + 1.0) * (nu + 1.0 + m) > ratio_num:
            return s
    raise EvaluationError(
        f"I_{m}({x}) series did not converge in {ctrl.max_terms} terms",
        partial=s, terms=ctrl.max_terms)


def _series_i_scaled_core(m, x, ctrl):
    """Return (e^{-x} I_m(x), peak index) by summing outward from the largest term."""
    if x == 0.0:
        return (1.0 if m == 0 else 0.0), 0
    half = 0.5 * x
    h2 = half * half
    # peak of t_nu at (nu+1)(nu+m+1) ~ half^2
    nu_star = int(max(0.0, 0.5 * (math.sqrt(m * m + x * x) - m - 2.0)))
    # exact summation of the large logs keeps the common scale to ~1 ulp
    lt = math.fsum([(2 * nu_star + m) * math.log(half),
                    -ln_factorial(nu_star), -ln_factorial(nu_star + m), -x])
    t_star = math.exp(lt)
    s = t_star
    comp = 0.0
    # upward sweep
    term = t_star
    nu = nu_star
    for _ in range(ctrl.max_terms):
        term *= h2 / ((nu + 1.0) * (nu + 1.0 + m))
        nu += 1
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if term <= ctrl.rel_tol * s and (nu + 1.0) * (nu + 1.0 + m) > h2:
            break
    else:
        raise EvaluationError(
            f"scaled I_{m}({x}) upward sweep did not converge",
            partial=s, terms=ctrl.max_terms)
    # downward sweep
    term = t_star
    for nu in range(nu_star, 0, -1):
        term *= (nu * (nu + m)) / h2
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if term <= ctrl.rel_tol * s:
            break
    return s, nu_star


def bessel_i_scaled(m: int, x: float, control: SeriesControl | None = None) -> float:
    """Exponentially scaled modified Bessel function e^{-x} I_m(x), x real >= 0.

    Safe at large x where I_m itself overflows: the series is summed outward
    from its peak term so no intermediate quantity leaves double range.
    """
    ctrl = _control(control)
    if m < 0 or m != int(m):
        raise DomainError(f"order must be an integer >= 0, got {m!r}")
    if x < 0.0:
        raise DomainError(f"bessel_i_scaled requires x >= 0, got {x}")
    m = int(m)
    if x <= 690.0:
        # the plain series still fits in double range; two rounded factors
        return _series_i_real(m, x, ctrl) * math.exp(-x)
    return _series_i_scaled_core(m, x, ctrl)[0]


def bessel_i(m: int, w, control: SeriesControl | None = None):
    """Modified Bessel function I_m(w) of integer order m >= 0.

    Real w: ascending series (scaled form internally once the leading term
    would underflow); negative real w uses I_m(-x) = (-1)^m I_m(x).  Complex
    w: the entire-series route (w/2)^m R_m(w^2/4); accuracy degrades with
    cancellation roughly like e^{|Im w|}, so keep |w| <= 80 for full-precision
    work (documented plumbing bound, enforced only through max_terms).
    """
    ctrl = _control(control)
    if m < 0 or m != int(m):
        raise DomainError(f"order must be an integer >= 0, got {m!r}")
    m = int(m)
    if isinstance(w, complex):
        if w.imag == 0.0:
            return complex(bessel_i(m, w.real, ctrl))
        half = 0.5 * w
        return half ** m * bessel_i_reduced(m, half * half, ctrl)
    x = float(w)
    if x < 0.0:
        v = bessel_i(m, -x, ctrl)
        return -v if m % 2 else v
    if x <= 690.0:
        return _series_i_real(m, x, ctrl)
    return math.inf  # beyond double range; use bessel_i_scaled instead


def bessel_i_reduced(m: int, w, control: SeriesControl | None = None):
    """Entire reduced series R_m(w) = sum_nu w^nu / (nu! (nu+m)!).

    Satisfies I_m(2 sqrt(w)) = w^{m/2} R_m(w) on any branch, which makes it
    the single-valued series used by overlap kernels.  Accepts real or complex
    scalar w (ndarray support lives in the quadrature layer).
    """
    ctrl = _control(control)
    if m < 0 or m != int(m):
        raise DomainError(f"order must be an integer >= 0, got {m!r}")
    m = int(m)
    wc = complex(w)
    term = complex(math.exp(-ln_factorial(m)))
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    aw = abs(wc)
    for nu in range(ctrl.max_terms):
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        term *= wc / ((nu + 1.0) * (nu + 1.0 + m))
        if abs(term) <= ctrl.rel_tol * (abs(s) + 1e-300) \
                and (nu + 1.0) * (nu + 1.0 + m) > aw:
            break
    else:
        raise EvaluationError(
            f"reduced I series (m={m}, |w|={aw:.3g}) did not converge "
            f"in {ctrl.max_terms} terms", partial=s, terms=ctrl.max_terms)
    if isinstance(w, complex):
        return s
    return s.real


# ---------------------------------------------------------------------------
# modified Bessel K

def _k01_small(x, ctrl):
    """K_0(x), K_1(x) for 0 < x <= 2 via the classical log+harmonic series."""
    half = 0.5 * x
    q = half * half
    lg = math.log(half)
    # K_0 = -(log(x/2) + gamma) I_0 + sum_{k>=1} H_k q^k / (k!)^2
    s0 = 0.0
    c0 = 0.0
    term = 1.0
    hk = 0.0
    i0 = 1.0
    ci = 0.0
    for k in range(1, ctrl.max_terms):
        term *= q / (k * k)
        hk += 1.0 / k
        y = term - ci
        t = i0 + y
        ci = (t - i0) - y
        i0 = t
        piece = term * hk
        y = piece - c0
        t = s0 + y
        c0 = (t - s0) - y
        s0 = t
        if piece <= ctrl.rel_tol * (abs(s0) + 1.0):
            break
    k0 = -(lg + _EULER_GAMMA) * i0 + s0
    # K_1 = 1/x + log(x/2) I_1 - (x/4) sum_k [H_k + H_{k+1} - 2 gamma] q^k/(k!(k+1)!)
    i1 = 0.0
    s1 = 0.0
    c1 = 0.0
    term = 1.0          # q^k / (k! (k+1)!)
    hk = 0.0
    hk1 = 1.0
    i1c = 0.0
    for k in range(ctrl.max_terms):
        y = term - i1c
        t = i1 + y
        i1c = (t - i1) - y
        i1 = t
        piece = term * (hk + hk1 - 2.0 * _EULER_GAMMA)
        y = piece - c1
        t = s1 + y
        c1 = (t - s1) - y
        s1 = t
        term *= q / ((k + 1.0) * (k + 2.0))
        hk += 1.0 / (k + 1.0)
        hk1 += 1.0 / (k + 2.0)
        if term * (hk + hk1 + 2.0) <= ctrl.rel_tol:
            break
    k1 = 1.0 / x + lg * (half * i1) - 0.25 * x * s1
    return k0, k1


def _k01_cf_scaled(x, ctrl):
    """e^x K_0(x), e^x K_1(x) for x > 2 by the Steed-style continued fraction."""
    maxit = max(ctrl.max_terms, 10000)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    qq = cc = a1
    a = -a1
    s = 1.0 + qq * delh
    for i in range(1, maxit):
        a -= 2 * i
        cc = -a * cc / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        qq += cc * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = qq * delh
        s += dels
        if abs(dels / s) <= 1e-17:
            break
    else:
        raise EvaluationError(f"K continued fraction stalled at x={x}", terms=maxit)
    h = a1 * h
    ek0 = math.sqrt(math.pi / (2.0 * x)) / s
    ek1 = ek0 * (x + 0.5 - h) / x
    return ek0, ek1


def _k_upward(m, x, k0, k1):
    # K grows with order: upward recurrence is the stable direction
    if m == 0:
        return k0
    if m == 1:
        return k1
    prev, cur = k0, k1
    two_over_x = 2.0 / x
    for j in range(1, m):
        prev, cur = cur, prev + j * two_over_x * cur
        if math.isinf(cur):
            break
    return cur


def bessel_k(m: int, x: float, control: SeriesControl | None = None) -> float:
    """Modified Bessel function K_m(x) for integer m >= 0 and real x > 0."""
    ctrl = _control(control)
    if m < 0 or m != int(m):
        raise DomainError(f"order must be an integer >= 0, got {m!r}")
    if not x > 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    m = int(m)
    if x <= 2.0:
        k0, k1 = _k01_small(x, ctrl)
    else:
        ek0, ek1 = _k01_cf_scaled(x, ctrl)
        scale = math.exp(-x)
        k0, k1 = ek0 * scale, ek1 * scale
    return _k_upward(m, x, k0, k1)


def bessel_k_scaled(m: int, x: float, control: SeriesControl | None = None) -> float:
    """Exponentially scaled e^x K_m(x); safe at large x where K_m underflows."""
    ctrl = _control(control)
    if m < 0 or m != int(m):
        raise DomainError(f"order must be an integer >= 0, got {m!r}")
    if not x > 0.0:
        raise DomainError(f"bessel_k_scaled requires x > 0, got {x}")
    m = int(m)
    if x <= 2.0:
        k0, k1 = _k01_small(x, ctrl)
        scale = math.exp(x)
        k0, k1 = k0 * scale, k1 * scale
    else:
        k0, k1 = _k01_cf_scaled(x, ctrl)
    return _k_upward(m, x, k0, k1)


# ---------------------------------------------------------------------------
# hypergeometric and moment series

def gauss_2f1(a: float, b: float, c: float, x: float,
              control: SeriesControl | None = None) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) by its ascending series, |x| < 1.

    c must not be a non-positive integer.  Terminating (polynomial) cases are
    handled naturally when a or b is a non-positive integer.
    """
    ctrl = _control(control)
    if c <= 0.0 and c == int(c):
        raise DomainError(f"2F1 undefined for non-positive integer c = {c}")
    if not abs(x) < 1.0:
        raise DomainError(f"2F1 series requires |x| < 1, got x = {x}")
    s = 0.0
    comp = 0.0
    term = 1.0
    for k in range(ctrl.max_terms):
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x
        if term == 0.0:
            return s
        if abs(term) <= ctrl.rel_tol * (abs(s) + 1e-300) \
                and k + 1 > max(abs(a), abs(b)) * abs(x) / (1.0 - abs(x)):
            return s
    raise EvaluationError(
        f"2F1({a},{b};{c};{x}) did not converge in {ctrl.max_terms} terms",
        partial=s, terms=ctrl.max_terms)


def bessel_power_sum(power: int, order: int, x: float,
                     control: SeriesControl | None = None) -> float:
    """Weighted series sum_nu nu^power x^(2 nu) / (nu! (nu+order)!).

    The independent brute-force oracle behind every closed-form photon-number
    and su(1,1) expectation value: power 0 gives x^{-order} I_order(2x), and
    powers 1 and 2 assemble means and second moments.
    """
    ctrl = _control(control)
    if power < 0 or power != int(power):
        raise DomainError(f"power must be an integer >= 0, got {power!r}")
    if order < 0 or order != int(order):
        raise DomainError(f"order must be an integer >= 0, got {order!r}")
    if x < 0.0:
        raise DomainError(f"bessel_power_sum requires x >= 0, got {x}")
    power, order = int(power), int(order)
    x2 = x * x
    term = math.exp(-ln_factorial(order))
    s = 0.0
    comp = 0.0
    for nu in range(ctrl.max_terms):
        piece = term * float(nu) ** power if power else term
        y = piece - comp
        t = s + y
        comp = (t - s) - y
        s = t
        term *= x2 / ((nu + 1.0) * (nu + 1.0 + order))
        if nu > 0 and piece <= ctrl.rel_tol * s \
                and (nu + 1.0) * (nu + 1.0 + order) > x2:
            return s
    raise EvaluationError(
        f"bessel_power_sum({power},{order},{x}) did not converge",
        partial=s, terms=ctrl.max_terms)


def bessel_moment_sum(n: int, x: float,
                      control: SeriesControl | None = None) -> float:
    """Moment series S_n(x) = sum_nu nu^n x^(2 nu) / (nu! (nu+n)!).

    The weight power and the factorial order are deliberately the same index
    n here, matching the conventional definition of S_n; the two roles are
    decoupled by bessel_power_sum when expectation-value oracles need it.
    """
    return bessel_power_sum(n, n, x, control)

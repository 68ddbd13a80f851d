"""(p, r)-admissibility of metric-derived weights.

Three conditions are checked for a pair ``(w, v)``:

``w1``  the splitting inequality ``w(x,y) <= D (w(x,z) v(z,y) + v(x,z) w(z,y))``;
``w22`` the uniform bound on the ``l^{p'}`` norms of rows and columns of ``v/w``;
``w2``  the trade-off ``inf_tau a_{r'}(tau) + b_{p'}(tau) t <= D t^theta``.

Every infinite sum is split into an exact part over the enumerated ball and
the closed-form dyadic tail majorant, so reported norms come with a
certified error bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import (
    AdmissibleError,
    BallTooLargeError,
    GridTooCoarseError,
    HypothesisError,
    NonConvergentError,
    ResourceCapError,
)
from .groups import (
    CyclicGroup,
    GroupModel,
    IntegerLattice,
    element_cap,
    enumerate_ball,
    identity_ball,
    lengths_of_keys,
)
from .growth import GrowthEstimate, estimate_growth_exponent
from .weights import WeightSpec, ray_limit

INF = math.inf
THETA_SLACK = 0.1


def conjugate(p: float) -> float:
    """Hoelder conjugate ``p / (p - 1)`` with ``1' = inf`` and ``inf' = 1``."""
    p = float(p)
    if not p >= 1:
        raise ValueError(f"exponent must lie in [1, inf], got {p}")
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class ExponentSet:
    p: float
    r: float

    def __post_init__(self):
        conjugate(self.p)
        conjugate(self.r)

    @property
    def p_prime(self):
        return conjugate(self.p)

    @property
    def r_prime(self):
        return conjugate(self.r)


class NormBound(NamedTuple):
    """A computed norm and the certified gap to its upper bound."""

    value: float
    error_bound: float

    @property
    def upper(self):
        return self.value + self.error_bound


# --------------------------------------------------------------------------
# closed-form exponents
# --------------------------------------------------------------------------

def _d_over_pprime(d, E):
    return 0.0 if E.p_prime == INF else d / E.p_prime


def theta_exponent(s: float, d: float, E: ExponentSet) -> float:
    """``theta = d / (d + (s - d/p') r')``.

    ``theta = 0`` when ``d = 0`` (finite groups) and in the ``r = 1`` limit
    where ``r' = inf``.
    """
    if d < 0:
        raise ValueError("growth exponent must be >= 0")
    gap = s - _d_over_pprime(d, E)
    if gap <= 0:
        raise HypothesisError(f"hypothesis violated: s = {s} <= d/p' = {s - gap}")
    if d == 0 or E.r_prime == INF:
        return 0.0
    theta = d / (d + gap * E.r_prime)
    assert 0 < theta < 1
    return theta


def theta_claimed(s: float, d: float, E: ExponentSet) -> float | None:
    """Variant of the exponent with ``s - d/2`` in place of ``s - d/p'``; ``None`` where undefined.

    The two forms coincide exactly when ``p' = 2``.
    """
    if d == 0 or E.r_prime == INF:
        return 0.0
    den = d + (s - d / 2) * E.r_prime
    return d / den if den > 0 else None


def alpha_exponent(s: float, d: float, E: ExponentSet) -> float:
    """``alpha = 1 / ((1 - 1/r) d + (s - d/p'))``; ``tau = t^alpha`` balances both terms of the trade-off."""
    gap = s - _d_over_pprime(d, E)
    if gap <= 0:
        raise HypothesisError(f"hypothesis violated: s = {s} <= d/p' = {s - gap}")
    inv_r = 0.0 if E.r == INF else 1.0 / E.r
    den = (1.0 - inv_r) * d + gap
    if den <= 0:
        raise HypothesisError("hypothesis violated: alpha denominator <= 0")
    return 1.0 / den


def dyadic_tail_bound(s: float, p_prime: float, C: float, d: float, tau: float) -> float:
    """Upper bound on ``sum_{rho(x,y) >= tau} (1 + rho(x,y))^{-p' s}`` for one fixed ``x``.

    Summing over the annuli ``2^{j-1} tau <= rho < 2^j tau`` with
    ``|B(x, T)| <= C T^d`` gives
    ``C 2^{p's} tau^{-(p's - d)} q / (1 - q)`` where ``q = 2^{d - p's}``.
    """
    if not math.isfinite(p_prime):
        raise ValueError("dyadic tail bound needs a finite exponent p'")
    if tau < 1:
        raise ValueError("tau must be >= 1")
    q_exp = p_prime * s
    if q_exp <= d:
        raise NonConvergentError("tail", f"divergent tail: p's = {q_exp:g} <= d = {d:g}")
    q = 2.0 ** (d - q_exp)
    return C * 2.0 ** q_exp * tau ** (-(q_exp - d)) * q / (1.0 - q)


# --------------------------------------------------------------------------
# norms
# --------------------------------------------------------------------------

def _poly_exponent(W: WeightSpec, role: str) -> float:
    s = W.poly_exponent
    if s is None:
        raise NotImplementedError(f"{role}: only polynomial or trivial weights are supported here")
    return s


@dataclass(frozen=True)
class DistanceProfile:
    """Distance histograms seen from one center ``c``.

    ``row[n]`` counts ``y`` with ``rho(c, y) = n``; ``column[n]`` counts ``x``
    with ``rho(x, c) = n``. Both run over ``n < radius``.
    """

    row: np.ndarray
    column: np.ndarray
    radius: int
    saturated: bool


def distance_profile(G: GroupModel, radius: int, center=None) -> DistanceProfile:
    if center is None or G.canonical(center) == G.identity:
        ball = identity_ball(G, radius)
    else:
        ball = enumerate_ball(G, center, radius)
    ckey = G.encode(ball.center)
    # column distances rho(x, c) = |x^-1 c| for the candidates x in B(c, radius)
    xinv_c = G.multiply_keys(G.invert_keys(ball.keys), np.int64(ckey))
    col_len = lengths_of_keys(G, xinv_c, radius - 1) if ball.size else np.empty(0, dtype=np.int64)
    column = np.bincount(col_len, minlength=radius)[:radius].astype(np.int64)
    return DistanceProfile(ball.shell_sizes.copy(), column, int(radius), bool(ball.saturated))


class _NormEngine:
    """Evaluates a, b and the (w22) norm from one distance profile."""

    def __init__(self, w, v, G, E, radius, cert=None, center=None):
        self.w, self.v, self.G, self.E = w, v, G, E
        self.profile = distance_profile(G, radius, center)
        self.cert = cert
        self.n = np.arange(radius, dtype=np.float64)

    @property
    def radius(self):
        return self.profile.radius

    def _sides(self):
        return (self.profile.row, self.profile.column)

    def a(self, tau):
        n_max = max(1, math.ceil(tau))
        if n_max > self.radius:
            raise ValueError(f"tau={tau} exceeds the enumerated radius {self.radius}")
        vals = self.v.of_length(self.n[:n_max])
        rp = self.E.r_prime
        total = 0.0
        for hist in self._sides():
            h = hist[:n_max]
            if rp == INF:
                total += float(vals[h > 0].max())
            else:
                total += float(np.sum(h * vals ** rp)) ** (1.0 / rp)
        return total

    def _quotient_exponent(self):
        sigma = _poly_exponent(self.w, "w") - _poly_exponent(self.v, "v")
        return sigma

    def _check_convergence(self, label):
        sigma = self._quotient_exponent()
        pp = self.E.p_prime
        if self.profile.saturated:
            return sigma
        if sigma < 0:
            raise NonConvergentError(label, f"non-convergent {label}: v/w is unbounded")
        if pp == INF:
            return sigma
        cert = self.cert
        if cert is None or not cert.is_polynomial:
            raise HypothesisError(f"{label}: a polynomial growth certificate is required")
        if pp * sigma <= cert.d:
            raise NonConvergentError(
                label, f"non-convergent {label}: p's = {pp * sigma:g} <= d = {cert.d:g}"
            )
        return sigma

    def tail_sum(self, start, label):
        """Sum of ``(v/w)^{p'}`` over ``rho >= start`` on each side, as a :class:`NormBound`."""
        sigma = self._check_convergence(label)
        pp = self.E.p_prime
        R = self.radius
        log_q = -sigma * np.log1p(self.n[start:])
        value = 0.0
        error = 0.0
        for hist in self._sides():
            h = hist[start:]
            if pp == INF:
                present = h > 0
                value += float(np.exp(log_q[present]).max()) if present.any() else 0.0
                continue
            exact = float(np.sum(h * np.exp(pp * log_q)))
            tail = 0.0 if self.profile.saturated else dyadic_tail_bound(sigma, pp, self.cert.c, self.cert.d, R)
            lo = exact ** (1.0 / pp)
            value += lo
            error += (exact + tail) ** (1.0 / pp) - lo
        return NormBound(value, error)

    def b(self, tau):
        if tau >= self.radius:
            raise ValueError(f"precondition: tau={tau} must be < truncation radius {self.radius}")
        return self.tail_sum(max(1, math.ceil(tau)), "b")

    def w22(self):
        return self.tail_sum(0, "(w22)")


def truncated_norm_w22(w: WeightSpec, v: WeightSpec, G: GroupModel, E: ExponentSet,
                       truncation_radius: int, growth_cert: GrowthEstimate, center=None) -> NormBound:
    """Row sup plus column sup of ``||(v/w)(x, .)||_{p'}`` with a certified tail."""
    return _NormEngine(w, v, G, E, truncation_radius, growth_cert, center).w22()


def a_norm(v: WeightSpec, G: GroupModel, E: ExponentSet, tau: float, center=None) -> float:
    """Row plus column ``r'``-norm of ``v`` restricted to ``B(x, tau)``; exact."""
    radius = max(1, math.ceil(tau))
    return _NormEngine(v, v, G, E, radius, None, center).a(tau)


def b_norm(w: WeightSpec, v: WeightSpec, G: GroupModel, E: ExponentSet, tau: float,
           truncation_radius: int, growth_cert: GrowthEstimate, center=None) -> NormBound:
    """Row plus column ``p'``-norm of ``v/w`` off ``B(x, tau)``: exact up to the truncation radius, dyadic tail beyond."""
    if tau >= truncation_radius:
        raise ValueError(f"precondition: tau={tau} must be < truncation radius {truncation_radius}")
    return _NormEngine(w, v, G, E, truncation_radius, growth_cert, center).b(tau)


# --------------------------------------------------------------------------
# condition (w1)
# --------------------------------------------------------------------------

@dataclass
class D1Estimate:
    """Smallest splitting constant compatible with the sampled triples ``(e, y, z)``.

    ``value`` is ``max(sampled_max, ray_limit)``: the ratio along ``z = y``
    escaping to infinity tends to ``ray_limit`` without attaining it, and no
    valid constant on an infinite group can be smaller.
    """

    value: float
    sampled_max: float
    witness: dict
    attained: bool
    ray_limit: float | None
    radius: int


def estimate_D1(w: WeightSpec, v: WeightSpec, G: GroupModel, radius: int) -> D1Estimate:
    if radius < 2:
        raise ValueError("radius must be >= 2")
    ball = identity_ball(G, radius)
    keys, lengths = ball.keys, ball.lengths
    max_len = int(lengths.max())
    w.of_length(2 * max_len)
    v.of_length(2 * max_len)
    zinv = G.invert_keys(keys)
    zy = G.multiply_keys(zinv[None, :], keys[:, None])  # [i, j] = z_j^-1 y_i
    len_zy = lengths_of_keys(G, zy, 2 * max_len)
    ratio, i, j = kernels.splitting_scan(lengths, lengths, len_zy, w.code, v.code)
    infinite = G.order is None and not ball.saturated
    limit = ray_limit(w, v) if infinite else None
    value = max(ratio, limit) if limit is not None else ratio
    witness = {"x": G.identity, "y": G.decode(int(keys[i])), "z": G.decode(int(keys[j]))}
    return D1Estimate(value, ratio, witness, ratio >= value, limit, radius)


# --------------------------------------------------------------------------
# condition (w2)
# --------------------------------------------------------------------------

def default_t_grid(t_min=1.0, t_max=1e4, points=25):
    return np.logspace(math.log10(t_min), math.log10(t_max), points)


def default_tau_grid(truncation_radius, dense_until=64, ratio=1.1):
    """Integers ``1 .. 64`` then a geometric extension, all below the truncation radius."""
    top = truncation_radius - 1
    taus = list(range(1, min(dense_until, top) + 1))
    x = float(dense_until)
    while True:
        x *= ratio
        k = int(round(x))
        if k > top:
            break
        if k > taus[-1]:
            taus.append(k)
    return np.array(taus, dtype=np.float64)


@dataclass
class W2Result:
    tau_grid: np.ndarray
    a: np.ndarray
    b: np.ndarray
    b_error: np.ndarray
    t_grid: np.ndarray
    m: np.ndarray
    tau_star: np.ndarray
    theta_predicted: float
    theta_claimed: float | None
    alpha_predicted: float
    theta_measured: float
    d_constant: float
    passed: bool

    @property
    def bound(self):
        return self.d_constant * self.t_grid ** self.theta_predicted


def fit_slope(x, y):
    x, y = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    if np.ptp(x) == 0:
        return 0.0
    return float(np.polyfit(x, y, 1)[0])


def verify_w2(w: WeightSpec, v: WeightSpec, G: GroupModel, E: ExponentSet, t_grid, tau_grid,
              truncation_radius: int, growth_cert: GrowthEstimate, center=None,
              _engine: _NormEngine | None = None) -> W2Result:
    """Evaluate ``m(t) = min_tau a(tau) + b_upper(tau) t`` on the grids and fit its exponent.

    ``b_upper`` includes the certified tail, so ``m`` over-estimates the true
    infimum and the verdict is conservative. A minimiser sitting at the
    largest grid point means the grid does not reach the optimum:
    :class:`GridTooCoarseError` is raised instead of reporting it.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    tau_grid = np.asarray(tau_grid, dtype=np.float64)
    if t_grid.size == 0 or tau_grid.size == 0:
        raise ValueError("grids must be nonempty")
    if np.any(t_grid < 1) or np.any(tau_grid < 1):
        raise ValueError("grid values must be >= 1")
    engine = _engine or _NormEngine(w, v, G, E, truncation_radius, growth_cert, center)
    a = np.array([engine.a(tau) for tau in tau_grid])
    bb = [engine.b(tau) for tau in tau_grid]
    b = np.array([x.value for x in bb])
    b_err = np.array([x.error_bound for x in bb])
    m, idx = kernels.tradeoff_minimum(a, b + b_err, t_grid)
    if tau_grid.size > 1 and np.any(idx == tau_grid.size - 1):
        bad = t_grid[idx == tau_grid.size - 1]
        raise GridTooCoarseError(
            f"grid too coarse: minimising tau is the largest grid point {tau_grid[-1]:g} "
            f"for t in [{bad.min():g}, {bad.max():g}]", bad)

    sigma = engine._quotient_exponent()
    d = growth_cert.d
    theta = theta_exponent(sigma, d, E)
    alpha = alpha_exponent(sigma, d, E)
    theta_m = fit_slope(t_grid, m)
    d_const = float(np.max(m / t_grid ** theta))
    passed = math.isfinite(d_const) and theta_m <= theta + THETA_SLACK
    return W2Result(tau_grid, a, b, b_err, t_grid, m, tau_grid[idx], theta,
                    theta_claimed(sigma, d, E), alpha, theta_m, d_const, bool(passed))


# --------------------------------------------------------------------------
# full pipeline
# --------------------------------------------------------------------------

def default_growth_radius(G: GroupModel) -> int:
    if isinstance(G, IntegerLattice):
        return 16 if G.dim <= 2 else 12
    if isinstance(G, CyclicGroup):
        return max(16, G.n // 2 + 3)
    return 12


def auto_truncation_radius(G: GroupModel, budget: int = 300_000, max_radius: int = 1024) -> int:
    """Largest radius ``<= max_radius`` whose ball fits in ``budget`` elements.

    Finite groups get one more than the number of shells, which makes the
    enumerated ball saturated and every tail exactly zero.
    """
    budget = min(budget, element_cap())
    try:
        ball = enumerate_ball(G, G.identity, max_radius, cap=budget)
    except BallTooLargeError as exc:
        return max(2, exc.radius_reached)
    if ball.saturated:
        return ball.num_shells + 1
    return max_radius


@dataclass
class TheoremConfig:
    growth_min_radius: int | None = None
    growth_max_radius: int | None = None
    d1_radius: int = 6
    truncation_radius: int | None = None
    truncation_budget: int = 300_000
    t_grid: tuple | None = None
    tau_grid: tuple | None = None
    max_grid_extensions: int = 3


CONDITIONS = ("growth", "w1", "w22", "w2")


@dataclass
class AdmissibilityReport:
    group: str
    weight: str
    companion: str
    p: float
    r: float
    p_prime: float
    r_prime: float
    growth: GrowthEstimate | None = None
    d_used: float | None = None
    d1_estimate: float | None = None
    d1_sampled: float | None = None
    d1_witness: dict | None = None
    d1_attained: bool | None = None
    d1_ray_limit: float | None = None
    d1_theoretical_bound: float | None = None
    w22_value: float | None = None
    w22_error_bound: float | None = None
    truncation_radius: int | None = None
    ab_curve: list = field(default_factory=list)
    tradeoff_curve: list = field(default_factory=list)
    theta_predicted: float | None = None
    theta_claimed: float | None = None
    alpha_predicted: float | None = None
    theta_measured: float | None = None
    d_constant: float | None = None
    verdict: dict = field(default_factory=lambda: {c: "skipped" for c in CONDITIONS})
    reasons: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(self.verdict[c] == "pass" for c in CONDITIONS)

    def fail(self, condition, reason):
        self.verdict[condition] = "fail"
        self.reasons[condition] = reason


def _run_w2(w, v, G, E, config, cert, R):
    t_grid = np.asarray(config.t_grid if config.t_grid is not None else default_t_grid(), float)
    for attempt in range(config.max_grid_extensions + 1):
        if config.tau_grid is not None:
            tau_grid = np.asarray(config.tau_grid, float)
            if attempt:
                tau_grid = np.unique(np.concatenate([tau_grid[tau_grid < R - 1], default_tau_grid(R)]))
            tau_grid = tau_grid[tau_grid < R]
        else:
            tau_grid = default_tau_grid(R)
        try:
            return verify_w2(w, v, G, E, t_grid, tau_grid, R, cert), R
        except GridTooCoarseError:
            if attempt == config.max_grid_extensions:
                raise
            R *= 2
    raise AssertionError("unreachable")


def verify_theorem(w: WeightSpec, G: GroupModel, E: ExponentSet,
                   config: TheoremConfig | None = None) -> AdmissibilityReport:
    """Check all three admissibility conditions for ``w`` with the trivial companion ``v = 1``.

    Failures of a condition are recorded in the report with a reason;
    resource-cap errors propagate with a ``condition`` attribute naming the
    check they interrupted.
    """
    config = config or TheoremConfig()
    if w.poly_exponent is None:
        raise ValueError("only polynomial weights are covered; subexponential weights get axiom checks only")
    v = WeightSpec.trivial()
    s = w.poly_exponent
    report = AdmissibilityReport(G.name, w.label, v.label, E.p, E.r, E.p_prime, E.r_prime)
    condition = "growth"
    try:
        max_r = config.growth_max_radius or default_growth_radius(G)
        cert = estimate_growth_exponent(G, config.growth_min_radius, max_r)
        report.growth = cert
        report.d_used = cert.d
        if cert.is_polynomial:
            report.verdict["growth"] = "pass"
        else:
            report.fail("growth", f"growth: {cert.verdict}; polynomial growth hypothesis unmet")

        condition = "w1"
        d1 = estimate_D1(w, v, G, config.d1_radius)
        report.d1_estimate = d1.value
        report.d1_sampled = d1.sampled_max
        report.d1_witness = d1.witness
        report.d1_attained = d1.attained
        report.d1_ray_limit = d1.ray_limit
        report.d1_theoretical_bound = 2.0 ** s
        if math.isfinite(d1.value):
            report.verdict["w1"] = "pass"
        else:
            report.fail("w1", "(w1) splitting constant is not finite")
        if d1.value > 1.0:
            report.notes.append(
                "w1: splitting constant exceeds 1; (1+a+b)^s <= (1+a)^s + (1+b)^s fails for s > 1, "
                f"a finite constant (at most 2^s = {2.0 ** s:g}) still satisfies the condition"
            )

        if not cert.is_polynomial:
            return report

        R = config.truncation_radius or auto_truncation_radius(G, config.truncation_budget)
        report.truncation_radius = R
        condition = "w22"
        try:
            w22 = truncated_norm_w22(w, v, G, E, R, cert)
            report.w22_value, report.w22_error_bound = w22.value, w22.error_bound
            report.verdict["w22"] = "pass" if math.isfinite(w22.upper) else "fail"
        except NonConvergentError as exc:
            report.fail("w22", f"(w22) divergent: {exc}")
        report.notes.append("w22: the p'-th power w^{-p'} is summed throughout (a w^{-2} summand is read as w^{-p'})")

        condition = "w2"
        try:
            res, R2 = _run_w2(w, v, G, E, config, cert, R)
        except NonConvergentError as exc:
            report.fail("w2", f"(w2) divergent: {exc}")
        except HypothesisError as exc:
            report.fail("w2", f"(w2) {exc}")
        except GridTooCoarseError as exc:
            report.fail("w2", f"(w2) {exc}")
        else:
            report.truncation_radius = R2
            report.ab_curve = [(float(t), float(a), float(b), float(e))
                               for t, a, b, e in zip(res.tau_grid, res.a, res.b, res.b_error)]
            report.tradeoff_curve = [(float(t), float(m), float(ts), float(bd))
                                     for t, m, ts, bd in zip(res.t_grid, res.m, res.tau_star, res.bound)]
            report.theta_predicted = res.theta_predicted
            report.theta_claimed = res.theta_claimed
            report.alpha_predicted = res.alpha_predicted
            report.theta_measured = res.theta_measured
            report.d_constant = res.d_constant
            if res.passed:
                report.verdict["w2"] = "pass"
            else:
                report.fail("w2", f"(w2) measured exponent {res.theta_measured:.4g} exceeds "
                                  f"predicted {res.theta_predicted:.4g} + {THETA_SLACK}")
            if res.theta_claimed != res.theta_predicted:
                report.notes.append(
                    "w2: theta_claimed uses s - d/2 where theta_predicted uses s - d/p'; "
                    "the forms agree only for p' = 2"
                )
        return report
    except ResourceCapError as exc:
        exc.condition = condition
        raise
    except AdmissibleError as exc:
        report.fail(condition, f"{condition}: {exc}")
        return report


__all__ = [
    "ExponentSet", "NormBound", "DistanceProfile", "D1Estimate", "W2Result", "TheoremConfig",
    "AdmissibilityReport", "conjugate", "theta_exponent", "theta_claimed", "alpha_exponent",
    "dyadic_tail_bound", "distance_profile", "truncated_norm_w22", "a_norm", "b_norm",
    "estimate_D1", "verify_w2", "verify_theorem", "default_t_grid", "default_tau_grid",
    "auto_truncation_radius", "default_growth_radius", "fit_slope",
]

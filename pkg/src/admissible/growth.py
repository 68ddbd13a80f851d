"""Ball growth tables and polynomial growth exponents.

The minimal growth rate is an infimum over an infinite condition, so it is
replaced here by a least-squares slope on a finite radius range together
with a constant ``C`` certifying ``|B(e, tau)| <= C tau^d`` on that range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientRangeError
from .groups import GroupModel, identity_ball

SUPERPOLY_THRESHOLD = 0.05
MIN_FIT_POINTS = 4


@dataclass
class GrowthEstimate:
    group: str
    d_fit: float
    c_fit: float
    radius_range: tuple
    residual: float
    verdict: str
    second_differences: list = field(default_factory=list)
    d_exact: float | None = None
    c_exact: float | None = None
    finite_order: int | None = None

    @property
    def d(self):
        """Exponent used downstream: the closed-form value when known, else the fit."""
        return self.d_exact if self.d_exact is not None else self.d_fit

    @property
    def c(self):
        return self.c_exact if self.c_exact is not None else self.c_fit

    @property
    def is_polynomial(self):
        return self.verdict == "polynomial"


def growth_table(G: GroupModel, max_radius: int) -> list[tuple[int, int]]:
    """``(tau, |B(e, tau)|)`` for integer ``tau = 1 .. max_radius``."""
    if max_radius < 2:
        raise ValueError("max_radius must be >= 2")
    counts = identity_ball(G, max_radius).counts
    return [(tau, int(counts[tau])) for tau in range(1, max_radius + 1)]


def default_min_radius(max_radius: int) -> int:
    return max(1, min(max_radius // 2, max_radius - (MIN_FIT_POINTS - 1)))


def _certified_constant(taus, counts, d):
    c = float(np.max(counts / taus ** d))
    while np.any(counts > c * taus ** d):
        c = math.nextafter(c, math.inf)
    return c


def estimate_growth_exponent(G: GroupModel, min_radius: int | None = None,
                             max_radius: int = 12) -> GrowthEstimate:
    """Fit ``log |B(e, tau)|`` against ``log tau`` for ``tau`` in ``[min_radius, max_radius]``.

    ``min_radius`` defaults to half of ``max_radius``; small radii carry
    lower-order terms that bias the slope upwards.

    The verdict is ``super-polynomial`` when every discrete second
    difference of ``log |B|`` in ``log tau`` over the upper half of the range
    exceeds ``SUPERPOLY_THRESHOLD``, ``inconclusive`` when only some do, and
    ``polynomial`` otherwise. A ball that stops growing marks a finite group:
    ``d = 0`` and ``C = |G|``.
    """
    if min_radius is None:
        min_radius = default_min_radius(max_radius)
    if min_radius < 1 or max_radius - min_radius + 1 < MIN_FIT_POINTS:
        raise InsufficientRangeError(
            f"insufficient range [{min_radius}, {max_radius}]: need at least {MIN_FIT_POINTS} radii"
        )
    ball = identity_ball(G, max_radius)
    taus = np.arange(min_radius, max_radius + 1, dtype=np.float64)
    counts = ball.counts[min_radius: max_radius + 1].astype(np.float64)
    log_t, log_c = np.log(taus), np.log(counts)

    exact = G.exact_growth()
    d_exact, c_exact = exact if exact is not None else (None, None)
    finite = ball.saturated or G.order is not None and ball.size == G.order

    if finite:
        d_fit = 0.0
        intercept = float(np.log(ball.size))
        second = []
        verdict = "polynomial"
    else:
        d_fit, intercept = (float(v) for v in np.polyfit(log_t, log_c, 1))
        slopes = np.diff(log_c) / np.diff(log_t)
        second = np.diff(slopes).tolist()
        top = np.asarray(second[len(second) // 2:])
        if top.size and np.all(top > SUPERPOLY_THRESHOLD):
            verdict = "super-polynomial"
        elif np.any(top > SUPERPOLY_THRESHOLD):
            verdict = "inconclusive"
        else:
            verdict = "polynomial"

    residual = float(np.max(np.abs(log_c - (intercept + d_fit * log_t)) / np.maximum(np.abs(log_c), 1.0)))
    c_fit = _certified_constant(taus, counts, d_fit)
    return GrowthEstimate(
        group=G.name,
        d_fit=d_fit,
        c_fit=c_fit,
        radius_range=(int(min_radius), int(max_radius)),
        residual=residual,
        verdict=verdict,
        second_differences=[float(v) for v in second],
        d_exact=d_exact,
        c_exact=c_exact,
        finite_order=int(ball.size) if finite else None,
    )

"""Metric-derived weights and the weight axioms.

A weight on ``G x G`` is a function of the word distance only,
``w(x, y) = f(rho(x, y))``. The one-variable weight ``g -> w(e, g) = f(|g|)``
is what the axioms ``w(gh) <= w(g) w(h)``, ``w(g^-1) = w(g)``, ``w(e) = 1``
are checked on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import WeightOverflowError
from .groups import GroupModel, identity_ball, lengths_of_keys, metric

FAMILIES = ("trivial", "polynomial", "subexponential")
AXIOM_RTOL = 1e-12


@dataclass(frozen=True)
class WeightSpec:
    """A weight family and its parameters.

    ``polynomial``: ``(1 + rho)^s`` with ``s >= 0``.
    ``subexponential``: ``exp(alpha * rho^beta)`` with ``alpha > 0``, ``0 < beta < 1``.
    ``trivial``: identically 1.
    """

    family: str
    s: float = 0.0
    alpha: float = 1.0
    beta: float = 0.5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "polynomial" and not (self.s >= 0 and math.isfinite(self.s)):
            raise ValueError(f"polynomial weight needs finite s >= 0, got s={self.s}")
        if self.family == "subexponential":
            if not (self.alpha > 0 and math.isfinite(self.alpha)):
                raise ValueError(f"subexponential weight needs alpha > 0, got alpha={self.alpha}")
            if not 0 < self.beta < 1:
                raise ValueError(f"subexponential weight needs 0 < beta < 1, got beta={self.beta}")

    @classmethod
    def polynomial(cls, s):
        return cls("polynomial", s=float(s))

    @classmethod
    def subexponential(cls, alpha, beta):
        return cls("subexponential", alpha=float(alpha), beta=float(beta))

    @classmethod
    def trivial(cls):
        return cls("trivial")

    @property
    def code(self):
        """``(family, p1, p2)`` as consumed by :mod:`admissible.kernels`."""
        if self.family == "subexponential":
            return kernels.SUBEXPONENTIAL, self.alpha, self.beta
        if self.family == "polynomial" and self.s > 0:
            return kernels.POLYNOMIAL, self.s, 0.0
        return kernels.TRIVIAL, 0.0, 0.0

    @property
    def poly_exponent(self):
        """Exponent ``s`` for polynomial-type weights (trivial counts as ``s = 0``)."""
        if self.family == "subexponential":
            return None
        return self.s if self.family == "polynomial" else 0.0

    @property
    def label(self):
        if self.family == "polynomial":
            return f"poly(s={self.s:g})"
        if self.family == "subexponential":
            return f"subexp(alpha={self.alpha:g}, beta={self.beta:g})"
        return "trivial"

    def of_length(self, n):
        """Weight as a function of the distance; raises on float overflow."""
        family, p1, p2 = self.code
        with np.errstate(over="ignore"):
            values = kernels.weight_of_length_numpy(n, family, p1, p2)
        if not np.all(np.isfinite(values)):
            raise WeightOverflowError(f"weight overflow: {self.label} exceeds float range")
        return values


def weight_value(W: WeightSpec, G: GroupModel, x, y) -> float:
    return float(W.of_length(metric(G, x, y)))


def ray_limit(w: WeightSpec, v: WeightSpec) -> float:
    """``lim w(r) / (w(r) + v(r))`` as ``r -> infinity``.

    This is the splitting ratio along triples with ``z = y`` (or ``z = x``)
    escaping to infinity, so every admissible constant ``D`` in the
    splitting inequality is at least this value on an infinite group.
    """
    def growth(W):
        # Asymptotic order: (rank, leading parameter, secondary parameter).
        if W.family == "subexponential":
            return (1, W.beta, W.alpha)
        return (0, W.poly_exponent, 0.0)

    gw, gv = growth(w), growth(v)
    if gw > gv:
        return 1.0
    if gw == gv:
        return 0.5
    return 0.0


@dataclass
class AxiomReport:
    weight: str
    group: str
    radius: int
    num_elements: int
    max_ratio: float
    witness: tuple
    submultiplicative: bool
    symmetric: bool
    normalized: bool
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations


def verify_weight_axioms(W: WeightSpec, G: GroupModel, radius: int) -> AxiomReport:
    """Exhaustive axiom check of ``g -> W(e, g)`` over ``B(e, radius)``.

    Submultiplicativity is tested on every ordered pair, with relative slack
    ``AXIOM_RTOL``; the reported witness maximises ``w(xy) / (w(x) w(y))``.
    """
    ball = identity_ball(G, radius)
    keys, lengths = ball.keys, ball.lengths
    max_len = int(lengths.max())
    W.of_length(2 * max_len)  # overflow guard for every product below

    products = G.multiply_keys(keys[:, None], keys[None, :])
    len_xy = lengths_of_keys(G, products, 2 * max_len)
    ratio, i, j = kernels.submultiplicative_scan(lengths, lengths, len_xy, *W.code)
    witness = (G.decode(int(keys[i])), G.decode(int(keys[j])))

    inv_lengths = lengths_of_keys(G, G.invert_keys(keys), max_len)
    weights = W.of_length(lengths)
    symmetric = bool(np.array_equal(W.of_length(inv_lengths), weights))
    normalized = bool(W.of_length(0) == 1.0 and np.all(weights >= 1.0))

    violations = []
    submultiplicative = ratio <= 1.0 + AXIOM_RTOL
    if not submultiplicative:
        violations.append("submultiplicativity w(xy) <= w(x)w(y)")
    if not symmetric:
        violations.append("symmetry w(x^-1) = w(x)")
    if not normalized:
        violations.append("normalization w(e) = 1, w >= 1")
    return AxiomReport(W.label, G.name, radius, ball.size, ratio, witness,
                       bool(submultiplicative), symmetric, normalized, violations)

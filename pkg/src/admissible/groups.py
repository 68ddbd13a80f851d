"""Finitely generated groups, word metrics and exact ball enumeration.

Elements are handled in two forms. The canonical form is what users see:
integer tuples for ``Z^d``, the Heisenberg group and ``Z/n``, and reduced
words such as ``"aBa"`` for the free group (capital letter = inverse). The
key form is an ``int64`` code used for bulk work: breadth-first search,
deduplication and lookups all run on sorted key arrays.

The metric is the left-invariant word metric ``rho(x, y) = |x^-1 y|``, so a
ball around ``x`` is grown by right-multiplying by generators.
"""

from __future__ import annotations

import abc
import functools
import math
import os
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import BallTooLargeError, EncodingRangeError, LengthCapError

ELEMENT_CAP_ENV = "ADMISSIBLE_ELEMENT_CAP"
DEFAULT_ELEMENT_CAP = 10_000_000
DEFAULT_LENGTH_CAP = 4096


def element_cap():
    """Enumeration budget in elements, overridable through ``ADMISSIBLE_ELEMENT_CAP``."""
    raw = os.environ.get(ELEMENT_CAP_ENV)
    if not raw:
        return DEFAULT_ELEMENT_CAP
    return int(float(raw))


class GroupModel(abc.ABC):
    """A group with a finite symmetric generating set.

    Subclasses provide the scalar operations on canonical elements plus a
    bijective ``encode``/``decode`` pair onto int64 keys. The ``*_keys``
    methods have generic per-element fallbacks and vectorised overrides
    where the group allows.
    """

    name: str

    @property
    @abc.abstractmethod
    def identity(self): ...

    @property
    @abc.abstractmethod
    def generators(self) -> tuple: ...

    @abc.abstractmethod
    def multiply(self, g, h): ...

    @abc.abstractmethod
    def invert(self, g): ...

    @abc.abstractmethod
    def encode(self, g) -> int: ...

    @abc.abstractmethod
    def decode(self, key: int): ...

    @property
    def order(self) -> int | None:
        """Number of elements, or ``None`` for infinite groups."""
        return None

    def exact_growth(self) -> tuple[float, float] | None:
        """``(d, C)`` with ``|B(e, n)| <= C n^d`` for every integer n >= 1, if known in closed form."""
        return None

    def canonical(self, g):
        return g

    def closed_form_length(self, g) -> int | None:
        """Word length of a canonical ``g`` when a formula exists; ``None`` means search."""
        return None

    @functools.cached_property
    def generator_keys(self) -> np.ndarray:
        return np.array([self.encode(g) for g in self.generators], dtype=np.int64)

    def encode_many(self, elements) -> np.ndarray:
        return np.array([self.encode(self.canonical(g)) for g in elements], dtype=np.int64)

    def decode_many(self, keys) -> list:
        return [self.decode(int(k)) for k in np.asarray(keys).ravel()]

    def multiply_keys(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.empty(a.shape, dtype=np.int64)
        for idx in np.ndindex(a.shape):
            out[idx] = self.encode(self.multiply(self.decode(int(a[idx])), self.decode(int(b[idx]))))
        return out

    def invert_keys(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape, dtype=np.int64)
        for idx in np.ndindex(a.shape):
            out[idx] = self.encode(self.invert(self.decode(int(a[idx]))))
        return out

    def neighbour_keys(self, keys) -> np.ndarray:
        """Right products ``k * s`` for every key and generator, flattened."""
        keys = np.asarray(keys, dtype=np.int64)
        return self.multiply_keys(keys[:, None], self.generator_keys[None, :]).ravel()

    def __str__(self):
        return self.name


class _TupleGroup(GroupModel):
    """Groups whose elements are fixed-width integer tuples.

    Keys pack the coordinates, offset to be non-negative, into
    ``min(62, 63 // width)``-bit fields with the first coordinate most significant, so key order is
    lexicographic order on tuples.
    """

    width: int

    @property
    def _bits(self):
        return min(62, 63 // self.width)

    def canonical(self, g):
        if isinstance(g, (int, np.integer)):
            g = (g,)
        g = tuple(int(c) for c in g)
        if len(g) != self.width:
            raise ValueError(f"{self.name}: expected {self.width} coordinates, got {g!r}")
        return g

    def _encode_rows(self, rows):
        rows = np.asarray(rows, dtype=np.int64)
        bits = self._bits
        off = np.int64(1) << np.int64(bits - 1)
        shifted = rows + off
        if rows.size and (shifted.min() < 0 or shifted.max() >= (off << np.int64(1))):
            raise EncodingRangeError(
                f"{self.name}: coordinate outside +-2^{bits - 1}, cannot encode as int64 key"
            )
        keys = np.zeros(rows.shape[:-1], dtype=np.int64)
        for i in range(self.width):
            keys = (keys << np.int64(bits)) | shifted[..., i]
        return keys

    def _decode_rows(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        bits = self._bits
        mask = (np.int64(1) << np.int64(bits)) - 1
        off = np.int64(1) << np.int64(bits - 1)
        cols = []
        for i in range(self.width):
            shift = np.int64(bits * (self.width - 1 - i))
            cols.append(((keys >> shift) & mask) - off)
        return np.stack(cols, axis=-1)

    def _multiply_rows(self, a, b):
        raise NotImplementedError

    def _invert_rows(self, a):
        raise NotImplementedError

    def encode(self, g):
        return int(self._encode_rows(np.array([self.canonical(g)]))[0])

    def decode(self, key):
        return tuple(int(c) for c in self._decode_rows(np.array([key]))[0])

    def encode_many(self, elements):
        rows = np.array([self.canonical(g) for g in elements], dtype=np.int64).reshape(-1, self.width)
        return self._encode_rows(rows)

    def decode_many(self, keys):
        return [tuple(int(c) for c in row) for row in self._decode_rows(np.asarray(keys).ravel())]

    def multiply(self, g, h):
        out = self._multiply_rows(np.array([self.canonical(g)]), np.array([self.canonical(h)]))
        return tuple(int(c) for c in out[0])

    def invert(self, g):
        return tuple(int(c) for c in self._invert_rows(np.array([self.canonical(g)]))[0])

    def multiply_keys(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return self._encode_rows(self._multiply_rows(self._decode_rows(a), self._decode_rows(b)))

    def invert_keys(self, a):
        return self._encode_rows(self._invert_rows(self._decode_rows(a)))


@dataclass(frozen=True, eq=True)
class IntegerLattice(_TupleGroup):
    """``Z^d`` with the standard generators ``+-e_i``; the word metric is the l1 distance."""

    dim: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.dim > 9:
            raise ValueError("Z^d is supported for 1 <= d <= 9")

    @property
    def width(self):
        return self.dim

    @property
    def name(self):
        return "Z" if self.dim == 1 else f"Z^{self.dim}"

    @property
    def identity(self):
        return (0,) * self.dim

    @property
    def generators(self):
        gens = []
        for i in range(self.dim):
            for sign in (1, -1):
                g = [0] * self.dim
                g[i] = sign
                gens.append(tuple(g))
        return tuple(gens)

    def exact_growth(self):
        # |B(e, n)| counts l1 vectors of norm <= n - 1, at most (2n - 1)^d <= 2^d n^d.
        return float(self.dim), float(2 ** self.dim)

    def closed_form_length(self, g):
        return sum(abs(c) for c in g)

    def _multiply_rows(self, a, b):
        return a + b

    def _invert_rows(self, a):
        return -a


@dataclass(frozen=True, eq=True)
class Heisenberg(_TupleGroup):
    """Discrete Heisenberg group ``H3(Z)``.

    Elements ``(a, b, c)`` multiply as ``(a+a', b+b', c+c'+a*b')``; the
    generators are ``x = (1,0,0)``, ``y = (0,1,0)`` and their inverses.
    """

    width = 3
    name = "heisenberg"

    @property
    def identity(self):
        return (0, 0, 0)

    @property
    def generators(self):
        return ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0))

    def _multiply_rows(self, a, b):
        out = a + b
        out[..., 2] += a[..., 0] * b[..., 1]
        return out

    def _invert_rows(self, a):
        out = -a
        out[..., 2] += a[..., 0] * a[..., 1]
        return out


@dataclass(frozen=True, eq=True)
class CyclicGroup(_TupleGroup):
    """``Z/n`` generated by ``+-1``; elements are 1-tuples holding the residue."""

    n: int = 12
    width = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("Z/n needs n >= 2 for a nonempty generating set")

    @property
    def name(self):
        return f"Z/{self.n}"

    @property
    def identity(self):
        return (0,)

    @property
    def generators(self):
        if self.n == 2:
            return ((1,),)
        return ((1,), (self.n - 1,))

    @property
    def order(self):
        return self.n

    def exact_growth(self):
        return 0.0, float(self.n)

    def canonical(self, g):
        (r,) = super().canonical(g)
        return (r % self.n,)

    def closed_form_length(self, g):
        (r,) = g
        return r if self.n == 2 else min(r, self.n - r)

    def _multiply_rows(self, a, b):
        return (a + b) % self.n

    def _invert_rows(self, a):
        return (-a) % self.n


_FREE_LETTERS = "aAbB"
_FREE_DIGIT = {ch: i + 1 for i, ch in enumerate(_FREE_LETTERS)}
_FREE_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}
_MAX_FREE_LENGTH = 27  # 5**27 < 2**63


@dataclass(frozen=True, eq=True)
class FreeGroup(GroupModel):
    """Free group on ``a, b``. Elements are reduced words; ``A = a^-1``, ``B = b^-1``.

    A word is keyed by its letters read as base-5 digits (``a=1, A=2, b=3,
    B=4``), first letter most significant. The empty word is key 0.
    """

    name = "free2"

    @property
    def identity(self):
        return ""

    @property
    def generators(self):
        return ("a", "A", "b", "B")

    def canonical(self, g):
        word = []
        for ch in str(g):
            if ch not in _FREE_DIGIT:
                raise ValueError(f"free2: invalid letter {ch!r}")
            if word and word[-1] == _FREE_INVERSE[ch]:
                word.pop()
            else:
                word.append(ch)
        return "".join(word)

    def closed_form_length(self, g):
        return len(g)

    def multiply(self, g, h):
        return self.canonical(self.canonical(g) + self.canonical(h))

    def invert(self, g):
        return "".join(_FREE_INVERSE[ch] for ch in reversed(self.canonical(g)))

    def encode(self, g):
        if len(g) > _MAX_FREE_LENGTH:
            raise EncodingRangeError(f"free2: words longer than {_MAX_FREE_LENGTH} do not fit a key")
        key = 0
        for ch in g:
            key = key * 5 + _FREE_DIGIT[ch]
        return key

    def decode(self, key):
        letters = []
        while key:
            key, digit = divmod(key, 5)
            letters.append(_FREE_LETTERS[digit - 1])
        return "".join(reversed(letters))

    def neighbour_keys(self, keys):
        keys = np.asarray(keys, dtype=np.int64)
        if keys.size and keys.max() >= 5 ** (_MAX_FREE_LENGTH - 1):
            raise EncodingRangeError(f"free2: words longer than {_MAX_FREE_LENGTH} do not fit a key")
        last = keys % 5
        out = []
        for digit in (1, 2, 3, 4):
            inverse = digit + 1 if digit % 2 else digit - 1
            cancel = (keys > 0) & (last == inverse)
            out.append(np.where(cancel, keys // 5, keys * 5 + digit))
        return np.stack(out, axis=1).ravel()


_LATTICE_RE = re.compile(r"^z(?:\^?(\d+))?$")
_CYCLIC_RE = re.compile(r"^z/(\d+)$")


def group_from_name(name: str) -> GroupModel:
    """Look up a catalog group: ``Z``, ``Z^d``, ``heisenberg``, ``Z/n`` or ``free2``."""
    key = name.strip().lower().replace(" ", "")
    if key in {"heisenberg", "h3", "h3(z)"}:
        return Heisenberg()
    if key in {"free2", "f2"}:
        return FreeGroup()
    m = _CYCLIC_RE.match(key)
    if m:
        return CyclicGroup(int(m.group(1)))
    m = _LATTICE_RE.match(key)
    if m:
        return IntegerLattice(int(m.group(1) or 1))
    raise ValueError(f"unknown group {name!r}; expected Z, Z^d, heisenberg, Z/n or free2")


@dataclass(frozen=True, eq=False)
class BallIndex:
    """Elements within word distance ``< max_radius`` of ``center``, grouped by exact distance.

    ``keys`` lists the elements shell by shell, each shell in ascending key
    order; ``shell_offsets[n]:shell_offsets[n+1]`` delimits shell ``n``.
    ``saturated`` is set when the search ran out of new elements, i.e. the
    whole (finite) group was enumerated.
    """

    group: GroupModel
    center: object
    max_radius: int
    keys: np.ndarray
    shell_offsets: np.ndarray
    saturated: bool
    _sorted: tuple = field(init=False, repr=False)

    def __post_init__(self):
        order = np.argsort(self.keys, kind="stable")
        object.__setattr__(self, "_sorted", (self.keys[order], order))

    @property
    def num_shells(self):
        return len(self.shell_offsets) - 1

    @functools.cached_property
    def lengths(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_shells, dtype=np.int64), np.diff(self.shell_offsets))

    @functools.cached_property
    def shell_sizes(self) -> np.ndarray:
        """``|shell n|`` for ``n < max_radius`` (zeros past saturation)."""
        sizes = np.zeros(self.max_radius, dtype=np.int64)
        sizes[: self.num_shells] = np.diff(self.shell_offsets)
        return sizes

    @functools.cached_property
    def counts(self) -> np.ndarray:
        """``counts[tau] = |B(center, tau)|`` for integer ``0 <= tau <= max_radius``."""
        return np.concatenate([[0], np.cumsum(self.shell_sizes)])

    @property
    def size(self):
        return int(self.keys.size)

    def shell_keys(self, n):
        if n >= self.num_shells:
            return np.empty(0, dtype=np.int64)
        return self.keys[self.shell_offsets[n]: self.shell_offsets[n + 1]]

    @functools.cached_property
    def shells(self) -> tuple:
        return tuple(tuple(self.group.decode_many(self.shell_keys(n))) for n in range(self.max_radius))

    def elements(self) -> list:
        return self.group.decode_many(self.keys)

    def count(self, tau) -> int:
        """``|B(center, tau)|`` for real ``tau``; equals ``|B(center, ceil(tau))|``."""
        n = max(0, math.ceil(tau))
        if n > self.max_radius:
            raise ValueError(f"tau={tau} exceeds the enumerated radius {self.max_radius}")
        return int(self.counts[n])

    def distances(self, keys) -> np.ndarray:
        """Distance from ``center`` for each key; ``-1`` where the key lies outside the ball."""
        keys = np.asarray(keys, dtype=np.int64)
        sorted_keys, order = self._sorted
        pos = np.searchsorted(sorted_keys, keys)
        pos_c = np.minimum(pos, sorted_keys.size - 1)
        found = sorted_keys[pos_c] == keys
        return np.where(found, self.lengths[order[pos_c]], -1)

    def __contains__(self, g):
        return bool(self.distances([self.group.encode(self.group.canonical(g))])[0] >= 0)


def enumerate_ball(G: GroupModel, center, max_radius: int, cap: int | None = None) -> BallIndex:
    """Breadth-first enumeration of ``B(center, max_radius)``.

    Neighbours of shell ``n`` lie in shells ``n-1``, ``n`` or ``n+1`` because
    the generating set is symmetric, so only the two latest shells are
    subtracted when forming the next one.
    """
    if max_radius < 1:
        raise ValueError("max_radius must be >= 1")
    if not G.generators:
        raise ValueError(f"{G.name}: empty generating set")
    cap = element_cap() if cap is None else cap
    center = G.canonical(center)
    current = np.array([G.encode(center)], dtype=np.int64)
    previous = np.empty(0, dtype=np.int64)
    shells = [current]
    total = 1
    saturated = False
    for n in range(1, max_radius):
        nbrs = np.unique(G.neighbour_keys(current))
        new = np.setdiff1d(nbrs, current, assume_unique=True)
        new = np.setdiff1d(new, previous, assume_unique=True)
        if new.size == 0:
            saturated = True
            break
        total += new.size
        if total > cap:
            raise BallTooLargeError(n, total, cap)
        shells.append(new)
        previous, current = current, new
    offsets = np.concatenate([[0], np.cumsum([s.size for s in shells])]).astype(np.int64)
    return BallIndex(G, center, int(max_radius), np.concatenate(shells), offsets, saturated)


@functools.lru_cache(maxsize=32)
def _cached_identity_ball(G, max_radius, cap):
    return enumerate_ball(G, G.identity, max_radius, cap=cap)


def identity_ball(G: GroupModel, max_radius: int) -> BallIndex:
    """Cached ``B(e, max_radius)``; balls are immutable so sharing is safe.

    The current element cap is part of the cache key, so lowering it is
    honoured even for balls built earlier.
    """
    return _cached_identity_ball(G, int(max_radius), element_cap())


def lengths_of_keys(G: GroupModel, keys, bound: int) -> np.ndarray:
    """Word lengths of keyed elements known to have length ``<= bound``."""
    ball = identity_ball(G, int(bound) + 1)
    lengths = ball.distances(keys)
    if (lengths < 0).any():
        bad = np.asarray(keys).ravel()[np.argmax((lengths < 0).ravel())]
        raise LengthCapError(G.decode(int(bad)), bound)
    return lengths


def word_length(G: GroupModel, g, max_length: int = DEFAULT_LENGTH_CAP) -> int:
    """Word length of ``g``: the fewest generators whose product is ``g``.

    Searches balls of doubling radius; raises :class:`LengthCapError` rather
    than returning a guess once ``max_length`` is exceeded.
    """
    g = G.canonical(g)
    known = G.closed_form_length(g)
    if known is not None:
        if known > max_length:
            raise LengthCapError(g, max_length)
        return known
    key = G.encode(g)
    radius = 8
    while True:
        radius = min(radius, max_length + 1)
        try:
            ball = identity_ball(G, radius)
        except BallTooLargeError as exc:
            raise LengthCapError(g, exc.radius_reached) from exc
        d = int(ball.distances([key])[0])
        if d >= 0:
            return d
        if ball.saturated or radius > max_length:
            raise LengthCapError(g, max_length)
        radius *= 2


def metric(G: GroupModel, x, y, max_length: int = DEFAULT_LENGTH_CAP) -> int:
    """Left-invariant word metric ``rho(x, y) = |x^-1 y|``."""
    return word_length(G, G.multiply(G.invert(G.canonical(x)), G.canonical(y)), max_length)

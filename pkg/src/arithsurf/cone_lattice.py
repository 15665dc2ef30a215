"""
Exact geometry of rank-2 lattices and their strongly convex cones.

Everything here works over Python integers, so coordinates never overflow
no matter how fast a Hirzebruch-Jung recurrence grows.  Cones are stored
counterclockwise with primitive generators; resolution rays are listed in
the same counterclockwise order.

A functional ``Functional2(p, q)`` pairs with a vector ``(x, y)`` as
``p*x + q*y``.  Support functions follow the min-of-linear convention: a
function is *convex* when ``f(s) + f(t) <= f(s + t)`` on the cone, so its
linearity domains are cut out by taking a minimum of functionals.

EXAMPLES::

    >>> chain = resolve_cone(Cone2.of((1, 0), (-2, 5)))
    >>> chain.weights
    (-3, -2)
    >>> embedding_dimension(chain)
    4
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import Iterable, Sequence


@dataclass(frozen=True, order=True)
class LatticeVector:
    x: int
    y: int

    def __add__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector(self.x - other.x, self.y - other.y)

    def __neg__(self) -> LatticeVector:
        return LatticeVector(-self.x, -self.y)

    def __mul__(self, k: int) -> LatticeVector:
        return LatticeVector(k * self.x, k * self.y)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_primitive(self) -> bool:
        return gcd(self.x, self.y) == 1

    def primitive(self) -> LatticeVector:
        """Return the primitive vector on the same ray."""
        g = gcd(self.x, self.y)
        if g == 0:
            raise ValueError("the zero vector does not span a ray")
        return LatticeVector(self.x // g, self.y // g)

    def as_list(self) -> list[int]:
        return [self.x, self.y]


def vec(v: LatticeVector | Sequence[int]) -> LatticeVector:
    """Coerce a pair of integers to a :class:`LatticeVector`."""
    if isinstance(v, LatticeVector):
        return v
    x, y = v
    if not (isinstance(x, int) and isinstance(y, int)):
        raise TypeError(f"lattice coordinates must be integers, got {v!r}")
    return LatticeVector(int(x), int(y))


def det(a: LatticeVector, b: LatticeVector) -> int:
    """Oriented area ``a.x*b.y - a.y*b.x``."""
    return a.x * b.y - a.y * b.x


@dataclass(frozen=True, order=True)
class Functional2:
    """An element of the dual lattice, acting by ``(x, y) -> p*x + q*y``."""

    p: int
    q: int

    def __call__(self, v: LatticeVector) -> int:
        return self.p * v.x + self.q * v.y

    def __add__(self, other: Functional2) -> Functional2:
        return Functional2(self.p + other.p, self.q + other.q)

    def __sub__(self, other: Functional2) -> Functional2:
        return Functional2(self.p - other.p, self.q - other.q)

    def __mul__(self, k: int) -> Functional2:
        return Functional2(k * self.p, k * self.q)

    __rmul__ = __mul__

    def as_list(self) -> list[int]:
        return [self.p, self.q]

    @classmethod
    def det_with(cls, w: LatticeVector) -> Functional2:
        """The functional ``z -> det(z, w)``."""
        return cls(w.y, -w.x)


@dataclass(frozen=True)
class Cone2:
    """A full-dimensional strongly convex rational cone ``R>=0 u + R>=0 v``.

    Generators are made primitive and swapped if necessary so that
    ``det(u, v) > 0``.
    """

    u: LatticeVector
    v: LatticeVector

    def __post_init__(self) -> None:
        u, v = vec(self.u), vec(self.v)
        if u.is_zero() or v.is_zero():
            raise ValueError("cone generators must be nonzero")
        u, v = u.primitive(), v.primitive()
        d = det(u, v)
        if d == 0:
            raise ValueError(f"generators {u.as_list()} and {v.as_list()} are collinear")
        if d < 0:
            u, v = v, u
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, u: Sequence[int], v: Sequence[int]) -> Cone2:
        return cls(vec(u), vec(v))

    @property
    def index(self) -> int:
        """``det(u, v)``, the lattice index of the generators."""
        return det(self.u, self.v)

    def contains(self, z: LatticeVector) -> bool:
        return det(self.u, z) >= 0 and det(z, self.v) >= 0

    def dual(self) -> Cone2:
        """The dual cone, as a cone in the dual lattice (same coordinates)."""
        return Cone2(LatticeVector(self.v.y, -self.v.x), LatticeVector(-self.u.y, self.u.x))

    def inward_normals(self) -> tuple[Functional2, Functional2]:
        """Primitive functionals vanishing on ``u`` and on ``v``, nonnegative on the cone."""
        return Functional2(-self.u.y, self.u.x), Functional2(self.v.y, -self.v.x)


@dataclass(frozen=True)
class ResolutionChain:
    """Rays ``l_0 .. l_{m+1}`` of a nonsingular subdivision with self-intersection weights.

    Parameters
    ----------
    rays : tuple of LatticeVector
        Counterclockwise, consecutive pairs forming lattice bases.
    weights : tuple of int
        ``a_1 .. a_m`` with ``l_{i-1} + a_i l_i + l_{i+1} = 0``.
    """

    rays: tuple[LatticeVector, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        rays = tuple(vec(r) for r in self.rays)
        weights = tuple(int(a) for a in self.weights)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "weights", weights)
        if len(rays) != len(weights) + 2:
            raise ValueError("a chain with m weights needs m + 2 rays")
        for a, b in zip(rays, rays[1:]):
            if det(a, b) != 1:
                raise ValueError(f"rays {a.as_list()}, {b.as_list()} do not form a positive basis")
        for i, a in enumerate(weights, start=1):
            if a > -2:
                raise ValueError(f"weight a_{i} = {a} is not <= -2")
            if not (rays[i - 1] + a * rays[i] + rays[i + 1]).is_zero():
                raise ValueError(f"chain relation fails at i = {i}")

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def cone(self) -> Cone2:
        return Cone2(self.rays[0], self.rays[-1])


def is_nonsingular(cone: Cone2) -> bool:
    return abs(cone.index) == 1


def _basis_partner(u: LatticeVector) -> LatticeVector:
    """Some ``w`` with ``det(u, w) = 1``."""
    # extended Euclid on (u.x, u.y): s*u.x + t*u.y = 1, then w = (-t, s)
    old_r, r = u.x, u.y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return LatticeVector(-old_t, old_s)


def resolve_cone(cone: Cone2) -> ResolutionChain:
    """Coarsest nonsingular subdivision of ``cone``.

    The first interior ray is the unique lattice point ``l_1`` with
    ``det(u, l_1) = 1`` and ``0 < det(l_1, v) < det(u, v)``; after that each
    ray follows from ``l_{i+1} = b_i l_i - l_{i-1}`` with
    ``b_i = ceil(det(l_{i-1}, v) / det(l_i, v))``, stopping at ``v``.

    Examples
    --------
    >>> [r.as_list() for r in resolve_cone(Cone2.of((1, 0), (1, 2))).rays]
    [[1, 0], [1, 1], [1, 2]]
    """
    u, v = cone.u, cone.v
    n = cone.index
    if n == 1:
        return ResolutionChain((u, v), ())
    w = _basis_partner(u)
    # shift w by a multiple of u so that 0 < det(w, v) < n
    k = det(w, v) % n
    w = w + ((k - det(w, v)) // n) * u
    rays = [u, w]
    weights: list[int] = []
    while det(rays[-1], v) != 0:
        prev, cur = rays[-2], rays[-1]
        b = -(-det(prev, v) // det(cur, v))
        weights.append(-b)
        rays.append(b * cur - prev)
    return ResolutionChain(tuple(rays), tuple(weights))


def chain_to_cone(weights: Iterable[int]) -> tuple[Cone2, ResolutionChain]:
    """Rebuild the cone whose resolution has the given weights.

    Starts from ``l_0 = (1, 0)``, ``l_1 = (0, 1)`` and applies
    ``l_{i+1} = -l_{i-1} - a_i l_i``.
    """
    weights = tuple(weights)
    for a in weights:
        if a > -2:
            raise ValueError(f"weight {a} is not <= -2")
    rays = [LatticeVector(1, 0), LatticeVector(0, 1)]
    for a in weights:
        rays.append(-rays[-2] - a * rays[-1])
    chain = ResolutionChain(tuple(rays), weights)
    return Cone2(rays[0], rays[-1]), chain


def _require_singular(chain: ResolutionChain) -> None:
    if chain.m == 0:
        raise ValueError("the cone is nonsingular (m = 0); panel data is undefined")


def dual_basis(a: LatticeVector, b: LatticeVector) -> tuple[Functional2, Functional2]:
    """Functionals ``(a*, b*)`` with ``a*(a) = b*(b) = 1`` and ``a*(b) = b*(a) = 0``."""
    if det(a, b) != 1:
        raise ValueError("dual_basis needs a positively oriented lattice basis")
    return Functional2(b.y, -b.x), Functional2(-a.y, a.x)


def panels(chain: ResolutionChain) -> list[frozenset[Functional2]]:
    """Degree-one slabs ``P(1) .. P(m)`` of the dual monoid.

    ``P(i)`` consists of ``l*_{i,i} + j l*_{i,i+1}`` for
    ``1 - [i = m] <= j <= -a_i - 1 + [i = 1]``, written in the dual basis of
    ``(l_i, l_{i+1})``.
    """
    _require_singular(chain)
    m = chain.m
    out = []
    for i in range(1, m + 1):
        star_i, star_next = dual_basis(chain.rays[i], chain.rays[i + 1])
        lo = 1 - (i == m)
        hi = -chain.weights[i - 1] - 1 + (i == 1)
        out.append(frozenset(star_i + j * star_next for j in range(lo, hi + 1)))
    return out


def degree_one_slab_count(chain: ResolutionChain) -> int:
    return len(frozenset().union(*panels(chain)))


def embedding_dimension(chain: ResolutionChain) -> int:
    _require_singular(chain)
    return 3 - sum(a + 2 for a in chain.weights)


def hilbert_basis_dual(cone: Cone2) -> list[Functional2]:
    """Minimal generators of the dual monoid, counterclockwise in the dual lattice."""
    return [Functional2(r.x, r.y) for r in resolve_cone(cone.dual()).rays]


# ---------------------------------------------------------------------------
# support functions


@dataclass(frozen=True)
class Piece:
    lo: LatticeVector
    hi: LatticeVector
    functional: Functional2


@dataclass(frozen=True)
class SupportFunction:
    """A continuous piecewise-linear integral function on ``cone``.

    ``pieces`` subdivide the cone counterclockwise from ``cone.u`` to
    ``cone.v``; neighbouring functionals agree on the ray they share.
    Convexity is not enforced here, :func:`subdivision_of` checks it.
    """

    cone: Cone2
    pieces: tuple[Piece, ...]

    def __post_init__(self) -> None:
        pieces = tuple(self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise ValueError("a support function needs at least one piece")
        if pieces[0].lo != self.cone.u or pieces[-1].hi != self.cone.v:
            raise ValueError("pieces must start at u and end at v")
        for pc in pieces:
            if det(pc.lo, pc.hi) <= 0:
                raise ValueError("each piece must be a counterclockwise cone")
        for a, b in zip(pieces, pieces[1:]):
            if a.hi != b.lo:
                raise ValueError("pieces are not contiguous")
            if a.functional(a.hi) != b.functional(b.lo):
                raise ValueError(f"pieces disagree on the shared ray {a.hi.as_list()}")

    def __call__(self, z: LatticeVector | Sequence[int]) -> int:
        z = vec(z)
        if not self.cone.contains(z):
            raise ValueError(f"{z.as_list()} lies outside the cone")
        for pc in self.pieces:
            if det(pc.lo, z) >= 0 and det(z, pc.hi) >= 0:
                return pc.functional(z)
        raise AssertionError("pieces do not cover the cone")

    def functionals(self) -> list[Functional2]:
        return [pc.functional for pc in self.pieces]


def _check_ray_list(cone: Cone2, rays: Sequence[LatticeVector | Sequence[int]]) -> list[LatticeVector]:
    rays = [vec(r) for r in rays]
    if any(r.is_zero() for r in rays):
        raise ValueError("zero vector in ray list")
    rays = [r.primitive() for r in rays]
    if len(rays) < 2 or rays[0] != cone.u or rays[-1] != cone.v:
        raise ValueError("ray list must begin with u and end with v")
    for r in rays:
        if not cone.contains(r):
            raise ValueError(f"ray {r.as_list()} lies outside the cone")
    for a, b in zip(rays, rays[1:]):
        if det(a, b) <= 0:
            raise ValueError("rays are not strictly counterclockwise")
    return rays


def support_function_for(
    chain: ResolutionChain | Cone2, subdivision: Sequence[LatticeVector | Sequence[int]]
) -> SupportFunction:
    """A convex support function whose linearity domains are exactly ``subdivision``.

    With rays ``r_0 .. r_t`` the piece on ``[r_{j-1}, r_j]`` is the partial sum
    of ``z -> det(z, r_k)`` over ``k < j``; the overall function is the
    minimum of these partial sums.
    """
    cone = chain.cone if isinstance(chain, ResolutionChain) else chain
    rays = _check_ray_list(cone, subdivision)
    pieces = []
    acc = Functional2(0, 0)
    for lo, hi in zip(rays, rays[1:]):
        acc = acc + Functional2.det_with(lo)
        pieces.append(Piece(lo, hi, acc))
    return SupportFunction(cone, tuple(pieces))


def subdivision_of(f: SupportFunction) -> list[LatticeVector]:
    """Rays of the fan on which ``f`` is linear.

    Raises ``ValueError`` when ``f`` bends the wrong way across a ray,
    i.e. when extending the next piece's functional back over the previous
    piece drops below ``f`` there.
    """
    rays = [f.cone.u]
    for a, b in zip(f.pieces, f.pieces[1:]):
        if a.functional == b.functional:
            continue
        if b.functional(a.lo) < a.functional(a.lo):
            raise ValueError(f"not convex across ray {a.hi.as_list()}")
        rays.append(a.hi)
    rays.append(f.cone.v)
    return rays


# ---------------------------------------------------------------------------
# fractional ideals


def _dominates(cone: Cone2, b: Functional2, a: Functional2) -> bool:
    """True if ``b >= a`` pointwise on ``cone``."""
    return b(cone.u) >= a(cone.u) and b(cone.v) >= a(cone.v)


def minimal_antichain(cone: Cone2, gens: Iterable[Functional2]) -> frozenset[Functional2]:
    gens = set(gens)
    return frozenset(
        g for g in gens if not any(h != g and _dominates(cone, g, h) for h in gens)
    )


@dataclass(frozen=True)
class FractionalIdeal2:
    """Finite generating set of a fractional ideal of the dual monoid.

    When ``cone`` is supplied the generators are reduced to the antichain of
    minimal elements, which is the canonical form used for equality.
    """

    generators: frozenset[Functional2]

    def __init__(self, generators: Iterable[Functional2 | Sequence[int]], cone: Cone2 | None = None):
        gens = frozenset(g if isinstance(g, Functional2) else Functional2(*g) for g in generators)
        if not gens:
            raise ValueError("a fractional ideal needs at least one generator")
        if cone is not None:
            gens = minimal_antichain(cone, gens)
        object.__setattr__(self, "generators", gens)

    def sorted(self) -> list[Functional2]:
        return sorted(self.generators)


def ideal_to_function(J: FractionalIdeal2 | Iterable[Functional2], cone: Cone2) -> SupportFunction:
    """``z -> min(mu(z) for mu in J)`` as a :class:`SupportFunction`."""
    gens = sorted(J.generators if isinstance(J, FractionalIdeal2) else set(J))
    if not gens:
        raise ValueError("empty generator set")
    cuts = {cone.u, cone.v}
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            d = a - b
            # kernel line of a - b
            r = LatticeVector(-d.q, d.p).primitive()
            for cand in (r, -r):
                if det(cone.u, cand) > 0 and det(cand, cone.v) > 0:
                    cuts.add(cand)
    # counterclockwise order inside a strictly convex cone
    ordered = sorted(cuts, key=lambda z: Fraction(det(cone.u, z), det(cone.u, z) + det(z, cone.v)))
    pieces: list[Piece] = []
    for lo, hi in zip(ordered, ordered[1:]):
        mid = lo + hi
        best = min(gens, key=lambda g: (g(mid), g.p, g.q))
        if pieces and pieces[-1].functional == best:
            pieces[-1] = Piece(pieces[-1].lo, hi, best)
        else:
            pieces.append(Piece(lo, hi, best))
    return SupportFunction(cone, tuple(pieces))


def function_to_ideal(f: SupportFunction, cone: Cone2 | None = None) -> FractionalIdeal2:
    """Minimal generators of ``{a : a(z) >= f(z) for all z in the cone}``."""
    cone = cone or f.cone
    if cone != f.cone:
        raise ValueError("support function lives on a different cone")
    rays = subdivision_of(f)
    values = {r: f(r) for r in rays}
    u, v, n = cone.u, cone.v, cone.index
    n_u, n_v = cone.inward_normals()

    def member(a: Functional2) -> bool:
        return all(a(r) >= values[r] for r in rays)

    # a(u) and a(v) are bounded once a - n_u and a - n_v both leave the ideal
    a_hi = max(
        Fraction(n * (values[r] + det(r, v)) - det(u, r) * values[v], det(r, v)) for r in rays if r != v
    )
    b_hi = max(
        Fraction(n * (values[r] + det(u, r)) - det(r, v) * values[u], det(u, r)) for r in rays if r != u
    )
    candidates = []
    for A in range(values[u], ceil(a_hi) + 1):
        for B in range(values[v], ceil(b_hi) + 1):
            p_num, q_num = A * v.y - B * u.y, u.x * B - v.x * A
            if p_num % n or q_num % n:
                continue
            a = Functional2(p_num // n, q_num // n)
            if member(a) and not member(a - n_u) and not member(a - n_v):
                candidates.append(a)
    return FractionalIdeal2(candidates, cone)


def star_subdivision_max_ideal(cone: Cone2) -> list[LatticeVector]:
    """Rays of the log blow-up along the maximal ideal of the dual monoid."""
    return subdivision_of(ideal_to_function(hilbert_basis_dual(cone), cone))


__all__ = [
    "LatticeVector",
    "Functional2",
    "Cone2",
    "ResolutionChain",
    "Piece",
    "SupportFunction",
    "FractionalIdeal2",
    "vec",
    "det",
    "dual_basis",
    "is_nonsingular",
    "resolve_cone",
    "chain_to_cone",
    "panels",
    "degree_one_slab_count",
    "embedding_dimension",
    "hilbert_basis_dual",
    "support_function_for",
    "subdivision_of",
    "ideal_to_function",
    "function_to_ideal",
    "minimal_antichain",
    "star_subdivision_max_ideal",
]

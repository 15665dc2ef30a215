"""
Decorated dual graphs of special fibers of regular models over a DVR.

A :class:`FiberModel` lists the prime components of the special fiber
(multiplicity, constant-field degree over the residue field ``k``, kind,
self-intersection), their intersection points (one :class:`Edge` per
closed point, carrying its residue degree over ``k``), and the marked
horizontal branches.  Models produced by contraction additionally carry
:class:`SingularPoint` records; each record keeps the contracted chain so
that the pairing of the singular surface can be pulled back exactly.

All pairings are ``k``-valued; thresholds that need degrees over a
component's own constant field divide by ``kd`` at the call site.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import networkx as nx
import sympy

from .errors import ModelError

KINDS = ("P1", "conic", "node_rational", "general")


@dataclass(frozen=True)
class ResidueDatum:
    degree: int
    separable: bool = True

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ModelError(f"residue degree must be positive, got {self.degree}")


@dataclass(frozen=True)
class Component:
    """A prime component of the special fiber.

    ``genus`` is the arithmetic genus over the constant field and is only
    meaningful for kind ``general``; ``node_rational`` components have
    arithmetic genus 0 (their normalization is a projective line over a
    separable quadratic extension of the constant field).
    """

    id: str
    m: int
    kd: int
    sep: bool
    kind: str
    s: int
    genus: int = 0
    normal: bool = True

    @property
    def constant_field(self) -> ResidueDatum:
        return ResidueDatum(self.kd, self.sep)

    def chi(self) -> int:
        """Euler characteristic of the structure sheaf over ``k``, ignoring self-loop nodes."""
        if self.kind == "general":
            return self.kd * (1 - self.genus)
        return self.kd


@dataclass(frozen=True)
class Edge:
    """One closed intersection point; ``a == b`` marks a node of a single component.

    ``split`` only matters for self-loops: a split node has both branches
    rational over the point's residue field, a non-split one has them
    conjugate over a quadratic extension.
    """

    a: str
    b: str
    deg: int
    sep: bool = True
    split: bool = True

    @property
    def is_loop(self) -> bool:
        return self.a == self.b

    @property
    def point_residue(self) -> ResidueDatum:
        return ResidueDatum(self.deg, self.sep)

    def other(self, cid: str) -> str:
        return self.b if self.a == cid else self.a

    def touches(self, cid: str) -> bool:
        return cid in (self.a, self.b)


@dataclass(frozen=True)
class Branch:
    """A marked horizontal branch with ramification index ``e`` and residue degree ``f``."""

    id: str
    on: str
    e: int
    f: int
    sep: bool = True

    @property
    def residue(self) -> ResidueDatum:
        return ResidueDatum(self.f, self.sep)


@dataclass(frozen=True)
class SingularPoint:
    """A contracted chain, recorded as a point of the singular surface.

    ``chain`` holds the contracted components in chain order and ``edges``
    every edge with an endpoint on the chain, so the resolution can be
    reconstructed and pulled-back intersection numbers computed.
    """

    id: str
    chain_weights: tuple[int, ...]
    exc_variant: str
    str_variant: str
    residue: ResidueDatum
    embedding_dim: int
    chain: tuple[Component, ...]
    edges: tuple[Edge, ...]

    @property
    def chain_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.chain)

    def passages(self, branches: Iterable[Branch] = ()) -> list[tuple[str, int, bool]]:
        """``(outside id, degree over k, separable)`` for each way the outside meets the chain."""
        ids = set(self.chain_ids)
        out = []
        for e in self.edges:
            if e.a in ids and e.b not in ids:
                out.append((e.b, e.deg, e.sep))
            elif e.b in ids and e.a not in ids:
                out.append((e.a, e.deg, e.sep))
        for br in branches:
            if br.on in ids:
                out.append((br.id, br.f, br.sep))
        return out


@dataclass(frozen=True)
class FiberModel:
    p: int
    components: tuple[Component, ...]
    edges: tuple[Edge, ...] = ()
    branches: tuple[Branch, ...] = ()
    singular: tuple[SingularPoint, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "singular", tuple(self.singular))
        object.__setattr__(self, "_index", {c.id: c for c in self.components})

    @property
    def regular(self) -> bool:
        return not self.singular

    def ids(self) -> list[str]:
        return [c.id for c in self.components]

    def component(self, cid: str) -> Component:
        try:
            return self._index[cid]
        except KeyError:
            raise KeyError(f"unknown component {cid!r}") from None

    def has(self, cid: str) -> bool:
        return cid in self._index

    def edges_at(self, cid: str) -> list[tuple[int, Edge]]:
        return [(i, e) for i, e in enumerate(self.edges) if e.touches(cid)]

    def loops_at(self, cid: str) -> list[Edge]:
        return [e for e in self.edges if e.a == cid and e.b == cid]

    def branches_on(self, cid: str) -> list[Branch]:
        return [b for b in self.branches if b.on == cid]

    def branch(self, bid: str) -> Branch:
        for b in self.branches:
            if b.id == bid:
                return b
        raise KeyError(f"unknown branch {bid!r}")

    def singular_passages(self, cid: str) -> list[tuple[SingularPoint, int, bool]]:
        """``(point, degree, separable)``, one entry per branch of ``cid`` through a singular point."""
        out = []
        for sp in self.singular:
            for oid, deg, sep in sp.passages(self.branches):
                if oid == cid:
                    out.append((sp, deg, sep))
        return out

    def used_ids(self) -> set[str]:
        ids = set(self._index) | {b.id for b in self.branches}
        for sp in self.singular:
            ids.add(sp.id)
            ids.update(sp.chain_ids)
        return ids

    def fresh_id(self, prefix: str) -> str:
        used = self.used_ids()
        n = 1
        while f"{prefix}{n}" in used:
            n += 1
        return f"{prefix}{n}"

    def with_changes(self, **kw) -> FiberModel:
        return replace(self, **kw)


# ---------------------------------------------------------------------------
# pairing


def _regular_pairing(model: FiberModel, i: str, j: str) -> int:
    if i == j:
        return model.component(i).s
    return sum(e.deg for e in model.edges if {e.a, e.b} == {i, j})


def _chain_matrix(sp: SingularPoint) -> sympy.Matrix:
    ids = sp.chain_ids
    n = len(ids)
    mat = sympy.zeros(n, n)
    for r, c in enumerate(sp.chain):
        mat[r, r] = c.s
    for e in sp.edges:
        if e.a in ids and e.b in ids and e.a != e.b:
            r, c = ids.index(e.a), ids.index(e.b)
            mat[r, c] += e.deg
            mat[c, r] += e.deg
    return mat


def _chain_contacts(sp: SingularPoint, cid: str) -> sympy.Matrix:
    ids = sp.chain_ids
    vecb = sympy.zeros(len(ids), 1)
    for e in sp.edges:
        if e.a == cid and e.b in ids:
            vecb[ids.index(e.b), 0] += e.deg
        elif e.b == cid and e.a in ids:
            vecb[ids.index(e.a), 0] += e.deg
    return vecb


def _to_number(x) -> int | Fraction:
    q = Fraction(int(sympy.numer(x)), int(sympy.denom(x)))
    return int(q) if q.denominator == 1 else q


def intersection_number(model: FiberModel, i: str, j: str) -> int | Fraction:
    """Pairing of two live components.

    On a regular model this is the stored self-intersection on the diagonal
    and the sum of point degrees over shared edges off it.  On a model with
    singular points the pairing is pulled back through each contracted chain
    and may be a fraction.
    """
    model.component(i)
    model.component(j)
    value = _regular_pairing(model, i, j)
    if model.regular:
        return value
    total = sympy.Rational(value)
    for sp in model.singular:
        bi, bj = _chain_contacts(sp, i), _chain_contacts(sp, j)
        if bi.is_zero_matrix or bj.is_zero_matrix:
            continue
        total -= (bi.T * _chain_matrix(sp).inv() * bj)[0, 0]
    return _to_number(total)


@dataclass(frozen=True)
class IntersectionMatrix:
    ids: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]
    negative_definite: bool


def _leading_minors_negative_definite(mat: sympy.Matrix) -> bool:
    n = mat.rows
    for k in range(1, n + 1):
        minor = mat[:k, :k].det(method="bareiss")
        if (-1) ** k * minor <= 0:
            return False
    return True


def intersection_matrix(model: FiberModel, subset: Sequence[str] | None = None) -> IntersectionMatrix:
    """Gram matrix on ``subset`` with an exact negative-definiteness verdict."""
    ids = tuple(subset) if subset is not None else tuple(model.ids())
    rows = tuple(tuple(intersection_number(model, a, b) for b in ids) for a in ids)
    mat = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows]) if ids else sympy.zeros(0, 0)
    return IntersectionMatrix(ids, rows, bool(ids) and _leading_minors_negative_definite(mat))


# ---------------------------------------------------------------------------
# genus


def canonical_degree(model: FiberModel, cid: str) -> int:
    """``K . F`` from adjunction: ``K.F + F.F = -2 chi(O_F)``, self-loop nodes included."""
    comp = model.component(cid)
    chi = comp.chi() - sum(e.deg for e in model.loops_at(cid))
    return -2 * chi - comp.s


def _chain_canonical(sp: SingularPoint) -> list[sympy.Rational]:
    """Coefficients ``z`` with ``(K + sum z_i E_i) . E_j = 0`` on the chain."""
    k_vec = sympy.Matrix([-2 * c.chi() - c.s for c in sp.chain])
    return list(-(_chain_matrix(sp).inv() * k_vec))


def arithmetic_genus(model: FiberModel) -> int:
    """Arithmetic genus of the generic fiber, ``1 + (1/2) sum m_F (K . F)``.

    With singular points present the canonical class of the singular surface
    is used, pulled back through every contracted chain.
    """
    total = sympy.Rational(0)
    for c in model.components:
        total += c.m * canonical_degree(model, c.id)
    for sp in model.singular:
        z = _chain_canonical(sp)
        for c in model.components:
            b = _chain_contacts(sp, c.id)
            total += c.m * sum(zi * b[i, 0] for i, zi in enumerate(z))
    two_g_minus_2 = total
    if not (two_g_minus_2.is_integer and int(two_g_minus_2) % 2 == 0):
        raise ModelError(f"arithmetic genus is not an integer (2g - 2 = {two_g_minus_2})")
    return 1 + int(two_g_minus_2) // 2


def boundary_rank(model: FiberModel) -> int:
    return sum(b.e * b.f for b in model.branches)


def hyperbolicity(model: FiberModel) -> int:
    """``2g + r - 2``."""
    return 2 * arithmetic_genus(model) + boundary_rank(model) - 2


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    invariant: str
    target: str
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.invariant} at {self.target}"
        return f"{msg}: {self.detail}" if self.detail else msg


def is_prime_or_zero(p: int) -> bool:
    return p == 0 or (p > 0 and bool(sympy.isprime(p)))


def _check_component(c: Component) -> Iterator[Diagnostic]:
    if c.kind not in KINDS:
        yield Diagnostic("unknown kind", c.id, c.kind)
        return
    if c.m < 1:
        yield Diagnostic("multiplicity positive", c.id)
    if c.kd < 1:
        yield Diagnostic("constant field degree positive", c.id)
        return
    if c.kind == "general" and c.genus < 0:
        yield Diagnostic("genus nonnegative", c.id)
    if c.kind == "node_rational":
        if c.s % (2 * c.kd):
            yield Diagnostic("self-intersection divisibility", c.id, f"{c.s} not divisible by 2*{c.kd}")
    elif c.kind != "general" or c.normal:
        if c.s % c.kd:
            yield Diagnostic("self-intersection divisibility", c.id, f"{c.s} not divisible by {c.kd}")


def _live_or_chain(model: FiberModel) -> dict[str, Component]:
    comps = {c.id: c for c in model.components}
    for sp in model.singular:
        comps.update({c.id: c for c in sp.chain})
    return comps


def validate(model: FiberModel) -> list[Diagnostic]:
    """Every violated invariant, or an empty list."""
    out: list[Diagnostic] = []
    if not is_prime_or_zero(model.p):
        out.append(Diagnostic("residue characteristic is 0 or prime", "p", str(model.p)))
    if not model.components:
        out.append(Diagnostic("fiber nonempty", "components"))
        return out
    seen: set[str] = set()
    names = [c.id for c in model.components] + [b.id for b in model.branches]
    for sp in model.singular:
        names += [sp.id, *sp.chain_ids]
    for n in names:
        if n in seen:
            out.append(Diagnostic("unique ids", n))
        seen.add(n)
    for c in model.components:
        out.extend(_check_component(c))
    for sp in model.singular:
        for c in sp.chain:
            out.extend(_check_component(c))
    if out:
        return out

    comps = _live_or_chain(model)
    all_edges = list(model.edges) + [e for sp in model.singular for e in sp.edges]
    for i, e in enumerate(all_edges):
        tag = f"edge {e.a}-{e.b}#{i}"
        if e.a not in comps or e.b not in comps:
            out.append(Diagnostic("edge endpoints exist", tag))
            continue
        if e.deg < 1:
            out.append(Diagnostic("point degree positive", tag))
            continue
        for end in {e.a, e.b}:
            if e.deg % comps[end].kd:
                out.append(Diagnostic("point degree compatible with constant field", tag, end))
    live_ids = set(model.ids())
    for e in model.edges:
        if e.a in comps and e.b in comps and not {e.a, e.b} <= live_ids:
            out.append(Diagnostic("edges of a model join live components", f"edge {e.a}-{e.b}"))
    for b in model.branches:
        if b.on not in comps:
            out.append(Diagnostic("branch attached to a component", b.id))
            continue
        if b.e != comps[b.on].m:
            out.append(Diagnostic("ramification index equals multiplicity", b.id, f"e={b.e}, m={comps[b.on].m}"))
        if b.f < 1 or b.f % comps[b.on].kd:
            out.append(Diagnostic("branch residue degree compatible with constant field", b.id))
    if out:
        return out

    graph = nx.MultiGraph()
    graph.add_nodes_from(live_ids)
    for e in model.edges:
        graph.add_edge(e.a, e.b)
    for sp in model.singular:
        graph.add_node(sp.id)
        for oid, _, _ in sp.passages():
            graph.add_edge(sp.id, oid)
    if not nx.is_connected(graph):
        out.append(Diagnostic("dual graph connected", "components"))

    for c in model.components:
        row = sum(d.m * intersection_number(model, c.id, d.id) for d in model.components)
        if row != 0:
            out.append(Diagnostic("numerical triviality", c.id, f"sum m_j (F.F_j) = {row}"))
    for sp in model.singular:
        for c in sp.chain:
            row = sum(d.m * _pair_in_resolution(model, sp, c.id, d.id) for d in (*model.components, *sp.chain))
            if row != 0:
                out.append(Diagnostic("numerical triviality", c.id, f"sum m_j (F.F_j) = {row}"))
    if not out:
        try:
            arithmetic_genus(model)
        except ModelError as exc:
            out.append(Diagnostic("integral genus", "model", str(exc)))
    return out


def _pair_in_resolution(model: FiberModel, sp: SingularPoint, i: str, j: str) -> int:
    comps = {c.id: c for c in sp.chain}
    if i == j:
        return comps[i].s
    return sum(e.deg for e in sp.edges if {e.a, e.b} == {i, j})


def require_valid(model: FiberModel) -> FiberModel:
    diags = validate(model)
    if diags:
        raise ModelError("; ".join(str(d) for d in diags))
    return model


# ---------------------------------------------------------------------------
# comparison


def decorated_graph(model: FiberModel) -> nx.MultiGraph:
    """Multigraph with every decoration as exact node/edge attributes, ids dropped."""
    g = nx.MultiGraph()
    for c in model.components:
        g.add_node(("c", c.id), tag=("component", c.m, c.kd, c.sep, c.kind, c.s, c.genus, c.normal))
    for e in model.edges:
        g.add_edge(("c", e.a), ("c", e.b), tag=(e.deg, e.sep, e.split if e.is_loop else True))
    for b in model.branches:
        g.add_node(("b", b.id), tag=("branch", b.e, b.f, b.sep))
    for sp in model.singular:
        g.add_node(
            ("x", sp.id),
            tag=("singular", sp.chain_weights, sp.exc_variant, sp.str_variant, sp.residue, sp.embedding_dim),
        )
        for c in sp.chain:
            g.add_node(("c", c.id), tag=("chain", c.m, c.kd, c.sep, c.kind, c.s, c.genus, c.normal))
            g.add_edge(("x", sp.id), ("c", c.id), tag=("member",))
        for e in sp.edges:
            g.add_edge(("c", e.a), ("c", e.b), tag=(e.deg, e.sep, e.split if e.is_loop else True))
    for b in model.branches:
        g.add_edge(("b", b.id), ("c", b.on), tag=("attach",))
    return g


def isomorphic(a: FiberModel, b: FiberModel) -> bool:
    if a.p != b.p:
        return False
    ga, gb = decorated_graph(a), decorated_graph(b)
    return nx.is_isomorphic(
        ga,
        gb,
        node_match=lambda x, y: x["tag"] == y["tag"],
        edge_match=nx.algorithms.isomorphism.categorical_multiedge_match("tag", None),
    )


def multiplicity_vector(model: FiberModel) -> dict[str, int]:
    return {c.id: c.m for c in model.components}


def neighbours(model: FiberModel, cid: str) -> dict[str, int]:
    """Other live components meeting ``cid``, with the summed point degree."""
    out: dict[str, int] = defaultdict(int)
    for _, e in model.edges_at(cid):
        if not e.is_loop:
            out[e.other(cid)] += e.deg
    return dict(out)


__all__ = [
    "KINDS",
    "ResidueDatum",
    "Component",
    "Edge",
    "Branch",
    "SingularPoint",
    "FiberModel",
    "Diagnostic",
    "IntersectionMatrix",
    "validate",
    "is_prime_or_zero",
    "require_valid",
    "intersection_number",
    "intersection_matrix",
    "canonical_degree",
    "arithmetic_genus",
    "boundary_rank",
    "hyperbolicity",
    "decorated_graph",
    "isomorphic",
    "multiplicity_vector",
    "neighbours",
]

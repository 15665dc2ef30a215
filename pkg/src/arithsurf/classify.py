"""Contractibility sets, chain conditions, fundamental cycles and the log regular model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from . import cone_lattice
from .errors import ConditionFailure, InconsistentModel, PreconditionError
from .fiber_graph import (
    Component,
    FiberModel,
    ResidueDatum,
    SingularPoint,
    hyperbolicity,
    intersection_matrix,
)


@dataclass(frozen=True)
class Contact:
    """One closed point where a component meets the rest of the fiber or a branch."""

    target: str
    deg: int
    sep: bool
    via: str  # "edge", "branch" or "singular"


def contacts(model: FiberModel, cid: str) -> list[Contact]:
    out = []
    for _, e in model.edges_at(cid):
        if not e.is_loop:
            out.append(Contact(e.other(cid), e.deg, e.sep, "edge"))
    for b in model.branches_on(cid):
        out.append(Contact(b.id, b.f, b.sep, "branch"))
    for sp in model.singular:
        through = sp.passages(model.branches)
        mine = [t for t in through if t[0] == cid]
        if len(mine) == 1 and len(through) > 1:
            out.append(Contact(sp.id, sp.residue.degree, sp.residue.separable, "singular"))
    return out


def is_locally_normal(model: FiberModel, cid: str) -> bool:
    """No self-loop and no singular point where the component is non-normal."""
    comp = model.component(cid)
    if model.loops_at(cid):
        return False
    if comp.kind == "general" and not comp.normal:
        return False
    counts: dict[str, list[int]] = {}
    for sp, deg, _ in model.singular_passages(cid):
        counts.setdefault(sp.id, []).append(deg)
    for sp in model.singular:
        degs = counts.get(sp.id)
        if degs is not None and (len(degs) != 1 or degs[0] != sp.residue.degree):
            return False
    return True


def normal_crossings_around(model: FiberModel, cid: str) -> bool:
    return not model.singular_passages(cid)


@dataclass(frozen=True)
class ESets:
    e_P2: frozenset[str] = frozenset()
    e_P1: frozenset[str] = frozenset()
    e_P1p: frozenset[str] = frozenset()
    e_01p: frozenset[str] = frozenset()
    e_node: frozenset[str] = frozenset()
    e_eq_minus1: frozenset[str] = frozenset()
    e_le_minus2: frozenset[str] = frozenset()

    LABELS = {
        "e_P2": "E_P,2",
        "e_P1": "E_P,1",
        "e_P1p": "E_P,1'",
        "e_01p": "E_0,1'",
        "e_node": "E_node",
        "e_eq_minus1": "E_=-1",
        "e_le_minus2": "E_<=-2",
    }

    def as_dict(self) -> dict[str, list[str]]:
        return {name: sorted(getattr(self, name)) for name in self.LABELS}

    @property
    def any(self) -> frozenset[str]:
        return self.e_P2 | self.e_P1 | self.e_01p | self.e_node


def e_sets(model: FiberModel) -> ESets:
    p2, p1, p1p, o1p, node = set(), set(), set(), set(), set()
    eq1, le2 = set(), set()
    for c in model.components:
        if not is_locally_normal(model, c.id):
            continue
        cs = contacts(model, c.id)
        kd = c.kd
        if c.kind == "P1":
            if len(cs) == 2 and all(x.deg == kd for x in cs):
                p2.add(c.id)
            if len(cs) == 1 and cs[0].deg == kd:
                p1.add(c.id)
            if len(cs) == 1 and cs[0].deg == 2 * kd and cs[0].sep:
                p1p.add(c.id)
        if c.kind in ("P1", "conic") and len(cs) == 1 and cs[0].deg == 2 * kd and cs[0].sep:
            o1p.add(c.id)
        if c.kind == "node_rational" and len(cs) == 1 and cs[0].deg == 2 * kd:
            node.add(c.id)
        if not normal_crossings_around(model, c.id):
            continue
        if c.id in p2 | p1 | p1p and c.s == -kd:
            eq1.add(c.id)
        if c.id in p2 | o1p | node and c.s <= -2 * kd:
            le2.add(c.id)
    fz = frozenset
    return ESets(fz(p2), fz(p1), fz(p1p), fz(o1p), fz(node), fz(eq1), fz(le2))


# ---------------------------------------------------------------------------
# chain conditions


@dataclass(frozen=True)
class ExcResult:
    variant: str
    chain: tuple[str, ...]
    weights: tuple[int, ...]
    residue: ResidueDatum

    def geometric_weights(self) -> tuple[int, ...]:
        """Weights of the chain after splitting over a strict henselization of the point."""
        a = self.weights
        if self.variant == "Exc_x":
            return a
        if self.variant == "Exc_o":
            return a + a[-2::-1]
        half = (a[-1] - 2) // 2
        return a[:-1] + (half, half) + a[-2::-1]


def _edges_between(model: FiberModel, a: str, b: str):
    return [e for e in model.edges if {e.a, e.b} == {a, b} and a != b]


def check_exc(model: FiberModel, chain: Sequence[str]) -> ExcResult:
    """Classify a chain of components as an exceptional configuration, or raise ConditionFailure."""
    chain = list(chain)
    if not chain:
        raise PreconditionError("empty chain")
    if len(set(chain)) != len(chain):
        raise PreconditionError("repeated ids in chain")
    comps = [model.component(c) for c in chain]
    for c in comps:
        if model.loops_at(c.id) or model.singular_passages(c.id) or (c.kind == "general" and not c.normal):
            raise ConditionFailure("nc", c.id, f"{c.id} is not a normal crossing component")

    if all(c.kind == "P1" for c in comps) and len({c.kd for c in comps}) == 1:
        return _check_exc_x(model, comps)
    special = ("conic", "node_rational")
    if comps[0].kind in special and comps[-1].kind not in special:
        comps.reverse()
    last = comps[-1]
    if last.kind in special or (last.kind == "P1" and len(comps) > 1 and comps[0].kd == 2 * last.kd):
        return _check_exc_split(model, comps)
    for c in comps:
        if c.kind != "P1":
            raise ConditionFailure("i", c.id, f"{c.id} is not a projective line")
    raise ConditionFailure("i", comps[0].id, "constant fields along the chain do not match")


def _check_links(model: FiberModel, comps: list[Component], link_deg: int, need_sep: bool) -> None:
    ids = [c.id for c in comps]
    for i in range(len(ids) - 1):
        es = _edges_between(model, ids[i], ids[i + 1])
        if len(es) != 1 or es[0].deg != link_deg or (need_sep and not es[0].sep):
            raise ConditionFailure("iii", f"{ids[i]}-{ids[i + 1]}", "consecutive members must meet at exactly one rational point")
    for i in range(len(ids)):
        for j in range(i + 2, len(ids)):
            if _edges_between(model, ids[i], ids[j]):
                raise ConditionFailure("iv", f"{ids[i]}-{ids[j]}", "non-consecutive members meet")


def _check_exc_x(model: FiberModel, comps: list[Component]) -> ExcResult:
    kappa = comps[0].kd
    weights = []
    for c in comps:
        a = c.s // kappa
        if a > -2:
            raise ConditionFailure("ii", c.id, f"normalized self-intersection {a} > -2")
        weights.append(a)
    _check_links(model, comps, kappa, need_sep=False)
    return ExcResult("Exc_x", tuple(c.id for c in comps), tuple(weights), comps[0].constant_field)


def _check_exc_split(model: FiberModel, comps: list[Component]) -> ExcResult:
    last = comps[-1]
    kappa = last.kd
    variant = "Exc_e" if last.kind == "node_rational" else "Exc_o"
    for c in comps[:-1]:
        if c.kind != "P1" or c.kd != 2 * kappa:
            raise ConditionFailure("i", c.id, "inner members must be projective lines over the quadratic field")
    weights = []
    for c in comps[:-1]:
        a = c.s // (2 * kappa)
        if a > -2:
            raise ConditionFailure("ii", c.id, f"normalized self-intersection {a} > -2")
        weights.append(a)
    a_m = last.s // kappa
    if a_m > -2:
        raise ConditionFailure("ii_m", last.id, f"normalized self-intersection {a_m} > -2")
    weights.append(a_m)
    _check_links(model, comps, 2 * kappa, need_sep=True)
    return ExcResult(variant, tuple(c.id for c in comps), tuple(weights), last.constant_field)


def _outside_contacts(model: FiberModel, cid: str, inside: set[str]) -> list[Contact]:
    return [x for x in contacts(model, cid) if x.target not in inside]


def check_str(model: FiberModel, chain: Sequence[str], exc: ExcResult | None = None) -> str:
    """Classify how the rest of the fiber meets an exceptional chain."""
    exc = exc or check_exc(model, chain)
    ids = list(exc.chain)
    inside = set(ids)
    kappa = exc.residue.degree
    per = [_outside_contacts(model, c, inside) for c in ids]
    m = len(ids)

    if exc.variant != "Exc_x":
        for cid, cs in zip(ids[1:], per[1:]):
            if cs:
                raise ConditionFailure("Str1", cid, "only the first member may meet the outside")
        cs = per[0]
        if len(cs) == 1 and cs[0].deg == 2 * kappa and cs[0].sep:
            return "Str1"
        raise ConditionFailure("Str1", ids[0], "outside must meet the chain at one separable quadratic point")

    for cid, cs in zip(ids[1:-1], per[1:-1]):
        if cs:
            raise ConditionFailure("interior", cid, "an interior member meets the outside")
    if m == 1:
        cs = per[0]
        if len(cs) == 2 and all(x.deg == kappa for x in cs):
            return "Str0" if cs[0].target == cs[1].target else "Str2"
        if len(cs) == 1 and cs[0].deg == 2 * kappa and cs[0].sep:
            return "Str1x"
        raise ConditionFailure("ends", ids[0], "outside meets the chain in a configuration of the wrong rank")
    first, last = per[0], per[-1]
    for cid, cs in ((ids[0], first), (ids[-1], last)):
        if len(cs) != 1 or cs[0].deg != kappa:
            raise ConditionFailure("ends", cid, "each end must meet the outside at exactly one rational point")
    return "Str0" if first[0].target == last[0].target else "Str2"


# ---------------------------------------------------------------------------
# fundamental cycle


def fundamental_cycle(model: FiberModel, subset: Sequence[str]) -> dict[str, int]:
    im = intersection_matrix(model, subset)
    if not im.negative_definite:
        raise PreconditionError("intersection matrix on the subset is not negative definite")
    ids, mat = im.ids, im.matrix
    z = [1] * len(ids)
    while True:
        for j in range(len(ids)):
            if sum(z[i] * mat[i][j] for i in range(len(ids))) > 0:
                z[j] += 1
                break
        else:
            return dict(zip(ids, z))


# ---------------------------------------------------------------------------
# contraction


def contract_chain(model: FiberModel, chain: Sequence[str]) -> tuple[FiberModel, SingularPoint]:
    if set(chain) >= set(model.ids()):
        raise PreconditionError("cannot contract the whole fiber")
    exc = check_exc(model, chain)
    variant = check_str(model, chain, exc)
    ids = set(exc.chain)
    geometric = exc.geometric_weights()
    _, resolution = cone_lattice.chain_to_cone(geometric)
    emb = cone_lattice.embedding_dimension(resolution)
    sp = SingularPoint(
        id=model.fresh_id("x"),
        chain_weights=exc.weights,
        exc_variant=exc.variant,
        str_variant=variant,
        residue=exc.residue,
        embedding_dim=emb,
        chain=tuple(model.component(c) for c in exc.chain),
        edges=tuple(e for e in model.edges if e.a in ids or e.b in ids),
    )
    out = model.with_changes(
        components=tuple(c for c in model.components if c.id not in ids),
        edges=tuple(e for e in model.edges if e.a not in ids and e.b not in ids),
        singular=model.singular + (sp,),
    )
    return out, sp


@dataclass(frozen=True)
class LregResult:
    model: FiberModel
    singular_points: tuple[SingularPoint, ...]
    absolute_minimal: bool
    source: FiberModel | None = field(default=None, compare=False)


def _path_order(graph: nx.Graph, nodes: set[str], special: set[str]) -> list[str] | None:
    sub = graph.subgraph(nodes)
    if len(nodes) == 1:
        return list(nodes)
    ends = [n for n in sub if sub.degree(n) == 1]
    if len(ends) != 2 or any(sub.degree(n) > 2 for n in sub):
        return None
    start = min(ends, key=lambda n: (n in special, n))
    return list(nx.dfs_preorder_nodes(sub, start))


def _simple_graph(model: FiberModel) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(model.ids())
    for e in model.edges:
        if not e.is_loop:
            g.add_edge(e.a, e.b)
    return g


def _guard_low_genus(model: FiberModel, sets: ESets) -> None:
    ids = set(model.ids())
    for f in sets.e_P1:
        rest = ids - {f}
        if rest and rest <= sets.e_le_minus2:
            raise InconsistentModel(
                f"fiber is {f} plus contractible chains; such a model must be irreducible"
            )


def build_lreg(model: FiberModel) -> LregResult:
    """Contract every connected union of the chain-contractible set."""
    sets = e_sets(model)
    _guard_low_genus(model, sets)
    if hyperbolicity(model) <= 0:
        raise PreconditionError("2g + r - 2 must be positive")
    if sets.e_eq_minus1:
        raise PreconditionError(f"model is not minimal: {sorted(sets.e_eq_minus1)} can be blown down")
    graph = _simple_graph(model)
    special = {c.id for c in model.components if c.kind in ("conic", "node_rational")}
    pieces = sorted(nx.connected_components(graph.subgraph(sets.e_le_minus2)), key=min)
    current = model
    new_points = []
    for nodes in pieces:
        order = _path_order(graph, set(nodes), special)
        if order is None:
            raise InconsistentModel(f"contractible set {sorted(nodes)} is not a chain")
        try:
            current, sp = contract_chain(current, order)
        except ConditionFailure as exc:
            raise InconsistentModel(f"chain {order} fails clause {exc.clause} at {exc.witness}") from exc
        new_points.append(sp)
    after = e_sets(current)
    leftover = after.e_P2 | after.e_01p | after.e_node
    if leftover:
        raise InconsistentModel(f"contracted model still has contractible components {sorted(leftover)}")
    return LregResult(current, current.singular, not after.e_P1, source=model)


__all__ = [
    "Contact",
    "contacts",
    "ESets",
    "e_sets",
    "ExcResult",
    "check_exc",
    "check_str",
    "fundamental_cycle",
    "contract_chain",
    "LregResult",
    "build_lreg",
]

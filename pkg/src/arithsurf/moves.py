"""Blow-ups at closed points, blow-downs of exceptional curves, and minimal n.c.d. models.

Intersection bookkeeping follows the usual rule for a blow-up at a point
of residue degree ``d``: the exceptional curve has self-intersection ``-d``,
and a component passing through the point with multiplicity one loses ``d``
from its self-intersection (``4d`` for the two branches of a node lying on
the same component).  Blow-down reverses these updates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Union

from .classify import e_sets
from .errors import ModelError, PreconditionError
from .fiber_graph import Component, Edge, FiberModel, hyperbolicity, isomorphic


@dataclass(frozen=True)
class SmoothPoint:
    """A closed point of residue degree ``degree`` on one component, away from other special points."""

    component: str
    degree: int
    separable: bool = True


@dataclass(frozen=True)
class NodePoint:
    """The intersection point recorded by ``model.edges[edge]``."""

    edge: int


@dataclass(frozen=True)
class BranchPoint:
    """The point where a marked branch meets the fiber."""

    branch: str


@dataclass(frozen=True)
class InternalNode:
    """The singular point of a component of kind ``node_rational``."""

    component: str


PointSpec = Union[SmoothPoint, NodePoint, BranchPoint, InternalNode]


def _require_regular(model: FiberModel) -> None:
    if not model.regular:
        raise PreconditionError("moves apply to regular models only")


def _set_s(comp: Component, delta: int, **kw) -> Component:
    return replace(comp, s=comp.s + delta, **kw)


def _swap(model: FiberModel, *comps: Component) -> tuple[Component, ...]:
    by_id = {c.id: c for c in comps}
    return tuple(by_id.get(c.id, c) for c in model.components)


def blow_up(model: FiberModel, where: PointSpec) -> tuple[FiberModel, str]:
    """Blow up one closed point; returns the new model and the id of the exceptional curve."""
    _require_regular(model)
    new_id = model.fresh_id("E")
    comps, edges, branches = list(model.components), list(model.edges), list(model.branches)

    if isinstance(where, (SmoothPoint, BranchPoint)):
        if isinstance(where, BranchPoint):
            br = model.branch(where.branch)
            cid, d, sep = br.on, br.f, br.sep
        else:
            cid, d, sep = where.component, where.degree, where.separable
        f = model.component(cid)
        if d < 1 or d % f.kd:
            raise ModelError(f"point degree {d} is not a multiple of the constant field degree of {cid}")
        if f.kind == "node_rational" and d % (2 * f.kd):
            raise ModelError(f"degree of a smooth point on {cid} must be a multiple of {2 * f.kd}")
        new = Component(new_id, f.m, d, sep, "P1", -d)
        comps = list(_swap(model, _set_s(f, -d))) + [new]
        edges.append(Edge(cid, new_id, d, sep))
        if isinstance(where, BranchPoint):
            branches = [replace(b, on=new_id) if b.id == where.branch else b for b in branches]

    elif isinstance(where, NodePoint):
        if not 0 <= where.edge < len(edges):
            raise ModelError(f"no edge with index {where.edge}")
        e = edges.pop(where.edge)
        d = e.deg
        f = model.component(e.a)
        if e.is_loop:
            new = Component(new_id, 2 * f.m, d, e.sep, "P1", -d)
            comps = list(_swap(model, _set_s(f, -4 * d))) + [new]
            if e.split:
                edges += [Edge(f.id, new_id, d, e.sep), Edge(f.id, new_id, d, e.sep)]
            else:
                edges.append(Edge(f.id, new_id, 2 * d, e.sep))
        else:
            g = model.component(e.b)
            new = Component(new_id, f.m + g.m, d, e.sep, "P1", -d)
            comps = list(_swap(model, _set_s(f, -d), _set_s(g, -d))) + [new]
            edges += [Edge(f.id, new_id, d, e.sep), Edge(g.id, new_id, d, e.sep)]

    elif isinstance(where, InternalNode):
        f = model.component(where.component)
        if f.kind != "node_rational":
            raise ModelError(f"{f.id} has no internal node")
        k = f.kd
        new = Component(new_id, 2 * f.m, k, f.sep, "P1", -k)
        comps = list(_swap(model, replace(f, kind="P1", kd=2 * k, s=f.s - 4 * k))) + [new]
        edges.append(Edge(f.id, new_id, 2 * k, f.sep))
    else:
        raise TypeError(f"unsupported point spec {where!r}")

    return model.with_changes(components=tuple(comps), edges=tuple(edges), branches=tuple(branches)), new_id


def blow_down(model: FiberModel, e_id: str) -> FiberModel:
    """Contract an exceptional curve of the first kind that lies in the contractible set."""
    _require_regular(model)
    e = model.component(e_id)
    if e.kind != "P1" or e.s != -e.kd:
        raise PreconditionError(f"{e_id} is not an exceptional curve of the first kind")
    if e_id not in e_sets(model).e_eq_minus1:
        raise PreconditionError(f"{e_id} is not blow-down contractible in this model")
    k = e.kd
    touching = [x for _, x in model.edges_at(e_id)]
    brs = model.branches_on(e_id)
    rest_edges = [x for x in model.edges if not x.touches(e_id)]
    comps = [c for c in model.components if c.id != e_id]
    by_id = {c.id: c for c in comps}
    branches = list(model.branches)

    def bump(cid: str, delta: int, **kw) -> None:
        by_id[cid] = _set_s(by_id[cid], delta, **kw)

    if len(touching) == 1 and not brs:
        x = touching[0]
        f = by_id[x.other(e_id)]
        if x.deg == k:
            bump(f.id, k)
        elif x.deg == 2 * k:
            if not x.sep:
                raise PreconditionError("contraction at an inseparable quadratic point is not modeled")
            if k % f.kd == 0:
                bump(f.id, 4 * k)
                rest_edges.append(Edge(f.id, f.id, k, x.sep, split=False))
            elif f.kd == 2 * k and f.kind == "P1":
                bump(f.id, 4 * k, kind="node_rational", kd=k, sep=e.sep)
            else:
                raise PreconditionError(f"{f.id} cannot absorb a quadratic contraction point")
        else:
            raise PreconditionError(f"unexpected contact degree {x.deg} on {e_id}")
    elif len(touching) == 2 and not brs:
        x, y = touching
        f_id, g_id = x.other(e_id), y.other(e_id)
        if x.deg != k or y.deg != k:
            raise PreconditionError(f"contacts of {e_id} must be rational points")
        if f_id == g_id:
            bump(f_id, 4 * k)
            rest_edges.append(Edge(f_id, f_id, k, e.sep, split=True))
        else:
            bump(f_id, k)
            bump(g_id, k)
            rest_edges.append(Edge(f_id, g_id, k, e.sep))
    elif len(touching) == 1 and len(brs) == 1:
        x = touching[0]
        f_id = x.other(e_id)
        if x.deg != k or brs[0].f != k:
            raise PreconditionError(f"contacts of {e_id} must be rational points")
        bump(f_id, k)
        branches = [replace(b, on=f_id) if b.id == brs[0].id else b for b in branches]
    else:
        raise PreconditionError(f"contracting {e_id} would break normal crossings or empty the fiber")

    out_comps = tuple(by_id[c.id] for c in comps)
    return model.with_changes(components=out_comps, edges=tuple(rest_edges), branches=tuple(branches))


def blow_down_candidates(model: FiberModel) -> list[str]:
    return sorted(e_sets(model).e_eq_minus1)


def minimal_ncd(model: FiberModel, choose: Callable[[list[str]], str] | None = None) -> FiberModel:
    """Contract contractible exceptional curves until none is left.

    ``choose`` picks the next curve among the sorted candidates; the default
    takes the smallest id.
    """
    _require_regular(model)
    if hyperbolicity(model) <= 0:
        raise PreconditionError("2g + r - 2 must be positive for a unique minimal model")
    pick = choose or (lambda cands: cands[0])
    current = model
    while True:
        cands = blow_down_candidates(current)
        if not cands:
            return current
        current = blow_down(current, pick(cands))


__all__ = [
    "SmoothPoint",
    "NodePoint",
    "BranchPoint",
    "InternalNode",
    "PointSpec",
    "blow_up",
    "blow_down",
    "blow_down_candidates",
    "minimal_ncd",
    "isomorphic",
]

"""Reduction-type verdicts computed from minimal n.c.d. and log regular models."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

from .classify import LregResult, build_lreg, contacts, e_sets
from .errors import InconsistentModel, ModelError, PreconditionError
from .fiber_graph import (
    FiberModel,
    ResidueDatum,
    arithmetic_genus,
    boundary_rank,
    validate,
)
from .moves import minimal_ncd


@dataclass(frozen=True)
class Witness:
    target: str
    clause: str

    def __str__(self) -> str:
        return f"{self.clause} at {self.target}"


def _p_divides(p: int, n: int) -> bool:
    return p != 0 and n % p == 0


def log_smooth_at_node(m1: int, m2: int, point: ResidueDatum, p: int) -> bool:
    return not _p_divides(p, gcd(m1, m2)) and point.separable


def is_log_smooth(model: FiberModel, p: int) -> tuple[bool, list[Witness]]:
    """Combinatorial log smoothness test on a minimal regular n.c.d. model.

    Each failure is reported as a :class:`Witness`; the verdict is true iff
    there are none.  Components of ``p``-divisible multiplicity must be
    genus-0 curves with two rational contacts or one separable quadratic
    contact, with separable constant field and prime-to-``p`` neighbours.
    """
    if not model.regular:
        raise PreconditionError("log smoothness is judged on the regular n.c.d. model")
    out: list[Witness] = []
    for b in model.branches:
        if _p_divides(p, b.e):
            out.append(Witness(b.id, "wild branch ramification"))
        if not b.sep:
            out.append(Witness(b.id, "inseparable branch residue field"))
    sets = e_sets(model)
    allowed = sets.e_01p | sets.e_P2
    for c in model.components:
        if not _p_divides(p, c.m):
            if c.kind == "general" and not c.normal:
                out.append(Witness(c.id, "non-smooth component"))
            if not c.sep:
                out.append(Witness(c.id, "inseparable constant field"))
            continue
        if c.id not in allowed:
            out.append(Witness(c.id, "p-divisible multiplicity outside the allowed sets"))
        if not c.sep:
            out.append(Witness(c.id, "inseparable constant field"))
        for x in contacts(model, c.id):
            if x.via == "edge" and _p_divides(p, model.component(x.target).m):
                out.append(Witness(c.id, f"p-divisible neighbour {x.target}"))
    for i, e in enumerate(model.edges):
        tag = f"edge {e.a}-{e.b}#{i}"
        m1, m2 = model.component(e.a).m, model.component(e.b).m
        if not log_smooth_at_node(m1, m2, e.point_residue, p):
            clause = "inseparable node" if not e.sep else "p divides gcd of multiplicities"
            out.append(Witness(tag, clause))
    ok = not out
    if ok:
        _check_pstr(model, p)
    return ok, out


def _check_pstr(model: FiberModel, p: int) -> None:
    """A passing model's ``p``-divisible components must look like chains of type (0,2)."""
    for c in model.components:
        if not _p_divides(p, c.m):
            continue
        cs = contacts(model, c.id)
        rational_pair = len(cs) == 2 and all(x.deg == c.kd for x in cs)
        quadratic = len(cs) == 1 and cs[0].deg == 2 * c.kd and cs[0].sep
        if not (rational_pair or quadratic):
            raise InconsistentModel(f"log smooth verdict contradicts the structure of {c.id}")


def is_semistable(model: FiberModel) -> bool:
    if not model.regular:
        raise PreconditionError("semistability is judged on the regular n.c.d. model")
    if any(c.m != 1 or not c.sep or (c.kind == "general" and not c.normal) for c in model.components):
        return False
    if any(not e.sep for e in model.edges):
        return False
    return all(b.sep and b.e == 1 for b in model.branches)


def _special_points(model: FiberModel, cid: str) -> int:
    """Geometric count of nodes and marked points on a component."""
    comp = model.component(cid)
    total = 0
    for _, e in model.edges_at(cid):
        total += 2 * e.deg if e.is_loop else e.deg
    total += sum(b.f for b in model.branches_on(cid))
    total += sum(deg for _, deg, _ in model.singular_passages(cid))
    if comp.kind == "node_rational":
        total += 2 * comp.kd
    return total


def is_stable_lreg(lreg: LregResult) -> bool:
    model = lreg.model
    if any(c.m != 1 or not c.sep for c in model.components):
        return False
    if any(c.kind == "general" and not c.normal for c in model.components):
        return False
    if any(not e.sep for e in model.edges) or any(not b.sep or b.e != 1 for b in model.branches):
        return False
    if any(not sp.residue.separable for sp in model.singular):
        return False
    for c in model.components:
        if c.kind == "general":
            continue
        geometric = 2 * c.kd if c.kind == "node_rational" else c.kd
        if _special_points(model, c.id) < 3 * geometric:
            return False
    return True


def is_stable(report_or_lreg) -> bool:
    lreg = report_or_lreg.lreg if isinstance(report_or_lreg, ModelReport) else report_or_lreg
    return is_stable_lreg(lreg)


def lreg_reduced(lreg: LregResult) -> bool:
    return all(c.m == 1 for c in lreg.model.components)


def e_min(lreg: LregResult, p: int) -> int:
    source = lreg.source
    if source is None:
        raise PreconditionError("log regular model carries no n.c.d. source")
    ok, _ = is_log_smooth(source, p)
    if not ok:
        raise PreconditionError(f"model is not log smooth at p = {p}")
    e = lcm(*(c.m for c in lreg.model.components))
    if _p_divides(p, e):
        raise InconsistentModel(f"p = {p} divides e_min = {e}")
    return e


def stable_after_base_change(e: int, e_prime: int) -> bool:
    if e < 1 or e_prime < 1:
        raise ValueError("ramification indices must be positive")
    return e_prime % e == 0


@dataclass
class ModelReport:
    input: FiberModel
    p: int
    ncd: FiberModel
    lreg: LregResult
    g: int
    r: int
    log_smooth: bool
    witnesses: list[Witness]
    semistable: bool
    stable: bool
    e_min: int | None
    notes: list[str] = field(default_factory=list)

    def verdicts(self) -> dict:
        return {
            "p": self.p,
            "g": self.g,
            "r": self.r,
            "log_smooth": self.log_smooth,
            "witnesses": [{"target": w.target, "clause": w.clause} for w in self.witnesses],
            "semistable": self.semistable,
            "stable": self.stable,
            "e_min": self.e_min,
            "absolute_minimal": self.lreg.absolute_minimal,
            "notes": list(self.notes),
        }


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except (ModelError, PreconditionError) as exc:
        exc.args = (f"[{name}] {exc.args[0] if exc.args else exc}",) + exc.args[1:]
        exc.stage = name
        raise


def classify_model(model: FiberModel, p: int | None = None) -> ModelReport:
    p = model.p if p is None else p
    if p != model.p:
        model = model.with_changes(p=p)
    diags = validate(model)
    if diags:
        raise ModelError("; ".join(str(d) for d in diags))
    ncd = _stage("minimal_ncd", minimal_ncd, model)
    lreg = _stage("build_lreg", build_lreg, ncd)
    ls, witnesses = _stage("log_smooth", is_log_smooth, ncd, p)
    semi = is_semistable(ncd)
    stable = is_stable_lreg(lreg)
    notes: list[str] = []
    emin = _stage("e_min", e_min, lreg, p) if ls else None
    if stable and not semi:
        raise InconsistentModel("stable verdict without semistability")
    if semi and not ls:
        raise InconsistentModel("semistable verdict without log smoothness")
    if ls and stable != lreg_reduced(lreg):
        raise InconsistentModel("stability disagrees with reducedness of the log regular fiber")
    if not lreg.absolute_minimal:
        notes.append("log regular model is not absolutely minimal")
    return ModelReport(
        input=model,
        p=p,
        ncd=ncd,
        lreg=lreg,
        g=arithmetic_genus(ncd),
        r=boundary_rank(ncd),
        log_smooth=ls,
        witnesses=witnesses,
        semistable=semi,
        stable=stable,
        e_min=emin,
        notes=notes,
    )


__all__ = [
    "Witness",
    "log_smooth_at_node",
    "is_log_smooth",
    "is_semistable",
    "is_stable",
    "is_stable_lreg",
    "lreg_reduced",
    "e_min",
    "stable_after_base_change",
    "ModelReport",
    "classify_model",
]

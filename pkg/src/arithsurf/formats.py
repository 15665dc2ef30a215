"""JSON and DOT serialization for models and cone literals."""

from __future__ import annotations

import json
from typing import Any

from . import cone_lattice as cl
from .errors import ModelError
from .fiber_graph import Branch, Component, Edge, FiberModel, ResidueDatum, SingularPoint


def _require(obj: dict, key: str, kind: type | tuple, where: str) -> Any:
    if key not in obj:
        raise ModelError(f"missing field {key!r} in {where}")
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ModelError(f"field {key!r} in {where} must be an integer")
    if not isinstance(value, kind):
        raise ModelError(f"field {key!r} in {where} has the wrong type")
    return value


def component_from_json(obj: dict) -> Component:
    where = f"component {obj.get('id', '?')}"
    kind = _require(obj, "kind", str, where)
    extra = {}
    if kind == "general":
        extra = {"genus": _require(obj, "genus", int, where), "normal": _require(obj, "normal", bool, where)}
    return Component(
        id=_require(obj, "id", str, where),
        m=_require(obj, "m", int, where),
        kd=_require(obj, "kd", int, where),
        sep=_require(obj, "sep", bool, where),
        kind=kind,
        s=_require(obj, "s", int, where),
        **extra,
    )


def component_to_json(c: Component) -> dict:
    out = {"id": c.id, "m": c.m, "kd": c.kd, "sep": c.sep, "kind": c.kind, "s": c.s}
    if c.kind == "general":
        out["genus"] = c.genus
        out["normal"] = c.normal
    return out


def edge_from_json(obj: dict) -> Edge:
    where = f"edge {obj.get('a', '?')}-{obj.get('b', '?')}"
    a, b = _require(obj, "a", str, where), _require(obj, "b", str, where)
    split = _require(obj, "split", bool, where) if a == b else True
    return Edge(a, b, _require(obj, "deg", int, where), _require(obj, "sep", bool, where), split)


def edge_to_json(e: Edge) -> dict:
    out = {"a": e.a, "b": e.b, "deg": e.deg, "sep": e.sep}
    if e.is_loop:
        out["split"] = e.split
    return out


def branch_from_json(obj: dict) -> Branch:
    where = f"branch {obj.get('id', '?')}"
    return Branch(
        _require(obj, "id", str, where),
        _require(obj, "on", str, where),
        _require(obj, "e", int, where),
        _require(obj, "f", int, where),
        _require(obj, "sep", bool, where),
    )


def branch_to_json(b: Branch) -> dict:
    return {"id": b.id, "on": b.on, "e": b.e, "f": b.f, "sep": b.sep}


def singular_from_json(obj: dict) -> SingularPoint:
    where = f"singular point {obj.get('id', '?')}"
    res = _require(obj, "residue", dict, where)
    weights = _require(obj, "chain_weights", list, where)
    return SingularPoint(
        id=_require(obj, "id", str, where),
        chain_weights=tuple(int(w) for w in weights),
        exc_variant=_require(obj, "exc", str, where),
        str_variant=_require(obj, "str", str, where),
        residue=ResidueDatum(_require(res, "degree", int, where), _require(res, "sep", bool, where)),
        embedding_dim=_require(obj, "embedding_dim", int, where),
        chain=tuple(component_from_json(c) for c in _require(obj, "chain", list, where)),
        edges=tuple(edge_from_json(e) for e in _require(obj, "edges", list, where)),
    )


def singular_to_json(sp: SingularPoint) -> dict:
    return {
        "id": sp.id,
        "chain_weights": list(sp.chain_weights),
        "exc": sp.exc_variant,
        "str": sp.str_variant,
        "residue": {"degree": sp.residue.degree, "sep": sp.residue.separable},
        "embedding_dim": sp.embedding_dim,
        "chain": [component_to_json(c) for c in sp.chain],
        "edges": [edge_to_json(e) for e in sp.edges],
    }


def model_from_json(obj: Any) -> FiberModel:
    if not isinstance(obj, dict):
        raise ModelError("model must be a JSON object")
    try:
        return FiberModel(
            p=_require(obj, "p", int, "model"),
            components=tuple(component_from_json(c) for c in _require(obj, "components", list, "model")),
            edges=tuple(edge_from_json(e) for e in obj.get("edges", [])),
            branches=tuple(branch_from_json(b) for b in obj.get("branches", [])),
            singular=tuple(singular_from_json(s) for s in obj.get("singular", [])),
        )
    except (AttributeError, TypeError) as exc:
        raise ModelError(f"malformed model: {exc}") from exc


def model_to_json(model: FiberModel) -> dict:
    out = {
        "p": model.p,
        "components": [component_to_json(c) for c in model.components],
        "edges": [edge_to_json(e) for e in model.edges],
        "branches": [branch_to_json(b) for b in model.branches],
    }
    if model.singular:
        out["singular"] = [singular_to_json(s) for s in model.singular]
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def loads_model(text: str) -> FiberModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from exc
    return model_from_json(data)


def load_model(path: str) -> FiberModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


def save_model(model: FiberModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model_to_json(model)))


# ---------------------------------------------------------------------------
# cone literals


def _int_pair(value: Any, name: str) -> tuple[int, int]:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or any(isinstance(x, bool) or not isinstance(x, int) for x in value)
    ):
        raise ModelError(f"{name} must be a pair of integers")
    return value[0], value[1]


def cone_from_json(obj: Any) -> cl.Cone2:
    if not isinstance(obj, dict) or "u" not in obj or "v" not in obj:
        raise ModelError('cone literal must look like {"u": [x, y], "v": [x, y]}')
    try:
        return cl.Cone2.of(_int_pair(obj["u"], "u"), _int_pair(obj["v"], "v"))
    except ValueError as exc:
        raise ModelError(str(exc)) from exc


def weights_from_json(obj: Any) -> list[int]:
    ws = obj.get("weights") if isinstance(obj, dict) else None
    if not isinstance(ws, list) or any(isinstance(w, bool) or not isinstance(w, int) for w in ws):
        raise ModelError('chain literal must look like {"weights": [-3, -2]}')
    return ws


def chain_to_json(chain: cl.ResolutionChain) -> dict:
    return {"rays": [r.as_list() for r in chain.rays], "weights": list(chain.weights)}


def cone_to_json(cone: cl.Cone2) -> dict:
    return {"u": cone.u.as_list(), "v": cone.v.as_list()}


# ---------------------------------------------------------------------------
# DOT


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def model_to_dot(model: FiberModel, name: str = "fiber") -> str:
    lines = [f"graph {_quote(name)} {{"]
    for c in model.components:
        label = f"{c.id} m={c.m} d={c.kd} s={c.s} {c.kind}"
        lines.append(f"  {_quote(c.id)} [label={_quote(label)}];")
    for b in model.branches:
        lines.append(f"  {_quote(b.id)} [shape=plaintext, label={_quote(f'{b.id} e={b.e} f={b.f}')}];")
        if model.has(b.on):
            lines.append(f"  {_quote(b.id)} -- {_quote(b.on)} [style=dashed];")
    for e in model.edges:
        lines.append(f"  {_quote(e.a)} -- {_quote(e.b)} [label={_quote(str(e.deg))}];")
    for sp in model.singular:
        label = f"{sp.id} ({','.join(str(w) for w in sp.chain_weights)})"
        lines.append(f"  {_quote(sp.id)} [shape=diamond, label={_quote(label)}];")
        for oid, deg, _ in sp.passages(model.branches):
            if model.has(oid):
                lines.append(f"  {_quote(sp.id)} -- {_quote(oid)} [label={_quote(str(deg))}];")
            else:
                lines.append(f"  {_quote(sp.id)} -- {_quote(oid)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"

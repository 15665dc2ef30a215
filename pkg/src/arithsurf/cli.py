"""Command-line entry point: ``arithsurf cone ...`` and ``arithsurf model ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import cone_lattice as cl
from . import formats
from .classify import build_lreg, e_sets
from .errors import ModelError, PreconditionError
from .fiber_graph import FiberModel, is_prime_or_zero, require_valid
from .moves import BranchPoint, InternalNode, NodePoint, PointSpec, SmoothPoint, blow_down, blow_up, minimal_ncd
from .reduction import classify_model, e_min

log = logging.getLogger("arithsurf")


@dataclass(frozen=True)
class RunConfig:
    command: str
    action: str
    inputs: tuple[str, ...]
    p: int | None
    fmt: str
    seed: int | None
    jobs: int
    at: str | None = None
    component: str | None = None


def _read_literal(arg: str):
    text = arg
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON literal: {exc}") from exc


def parse_point(spec: str, model: FiberModel) -> PointSpec:
    """``A``, ``A:2``, ``A:2:insep``, ``edge:N``, ``node:A`` or ``branch:D1``."""
    head, _, rest = spec.partition(":")
    if head == "edge":
        try:
            return NodePoint(int(rest))
        except ValueError:
            raise ModelError(f"bad edge index in {spec!r}") from None
    if head == "node":
        return InternalNode(rest)
    if head == "branch":
        return BranchPoint(rest)
    if not model.has(head):
        raise ModelError(f"unknown component {head!r} in point spec")
    comp = model.component(head)
    parts = rest.split(":") if rest else []
    default = 2 * comp.kd if comp.kind == "node_rational" else comp.kd
    try:
        degree = int(parts[0]) if parts else default
    except ValueError:
        raise ModelError(f"bad degree in {spec!r}") from None
    separable = not (len(parts) > 1 and parts[1] == "insep")
    return SmoothPoint(head, degree, separable)


def _emit(obj, fmt: str, text: str | None = None, dot: str | None = None) -> str:
    if fmt == "dot" and dot is not None:
        return dot
    if fmt == "text" and text is not None:
        return text
    return formats.dumps(obj)


def _model_summary(model: FiberModel) -> str:
    from .fiber_graph import arithmetic_genus, boundary_rank

    lines = [f"p={model.p} g={arithmetic_genus(model)} r={boundary_rank(model)}"]
    for c in model.components:
        lines.append(f"  {c.id}: m={c.m} d={c.kd} s={c.s} {c.kind}")
    for e in model.edges:
        lines.append(f"  {e.a}-{e.b}: deg={e.deg}{'' if e.sep else ' insep'}")
    for sp in model.singular:
        lines.append(
            f"  {sp.id}: weights={list(sp.chain_weights)} {sp.exc_variant} {sp.str_variant} emb={sp.embedding_dim}"
        )
    return "\n".join(lines) + "\n"


def _cone_command(cfg: RunConfig) -> str:
    data = _read_literal(cfg.inputs[0])
    if cfg.action == "resolve":
        chain = cl.resolve_cone(formats.cone_from_json(data))
        obj = formats.chain_to_json(chain)
        return _emit(obj, cfg.fmt, f"weights {obj['weights']}\n")
    if cfg.action == "chain":
        try:
            cone, chain = cl.chain_to_cone(formats.weights_from_json(data))
        except ValueError as exc:
            raise ModelError(str(exc)) from exc
        obj = {"cone": formats.cone_to_json(cone), **formats.chain_to_json(chain)}
        return _emit(obj, cfg.fmt, f"cone u={obj['cone']['u']} v={obj['cone']['v']}\n")
    if cfg.action == "panels":
        if isinstance(data, dict) and "weights" in data:
            try:
                _, chain = cl.chain_to_cone(formats.weights_from_json(data))
            except ValueError as exc:
                raise ModelError(str(exc)) from exc
        else:
            chain = cl.resolve_cone(formats.cone_from_json(data))
        ps = cl.panels(chain)
        obj = {
            "weights": list(chain.weights),
            "panels": [[f.as_list() for f in sorted(panel)] for panel in ps],
            "union": cl.degree_one_slab_count(chain),
            "embedding_dim": cl.embedding_dimension(chain),
        }
        return _emit(obj, cfg.fmt, f"union {obj['union']} embedding_dim {obj['embedding_dim']}\n")
    if cfg.action == "star":
        rays = cl.star_subdivision_max_ideal(formats.cone_from_json(data))
        obj = {"rays": [r.as_list() for r in rays]}
        return _emit(obj, cfg.fmt, " ".join(str(r) for r in obj["rays"]) + "\n")
    raise ModelError(f"unknown cone action {cfg.action!r}")


def _load(path: str, p: int | None) -> FiberModel:
    try:
        model = formats.load_model(path)
    except OSError as exc:
        raise ModelError(f"cannot read {path}: {exc.strerror}") from exc
    if p is not None:
        model = model.with_changes(p=p)
    return require_valid(model)


def _classify_one(path: str, p: int | None) -> dict:
    model = _load(path, p)
    report = classify_model(model, p)
    return {
        "file": path,
        **report.verdicts(),
        "singular_points": [formats.singular_to_json(sp) for sp in report.lreg.singular_points],
    }


def _report_text(rep: dict) -> str:
    head = (
        f"{rep['file']}: g={rep['g']} r={rep['r']} p={rep['p']} log_smooth={rep['log_smooth']} "
        f"semistable={rep['semistable']} stable={rep['stable']} e_min={rep['e_min']}"
    )
    lines = [head]
    lines += [f"  witness: {w['clause']} at {w['target']}" for w in rep["witnesses"]]
    for sp in rep["singular_points"]:
        lines.append(f"  singular {sp['id']}: weights={sp['chain_weights']} {sp['exc']} {sp['str']} emb={sp['embedding_dim']}")
    return "\n".join(lines) + "\n"


def _model_command(cfg: RunConfig) -> str:
    if cfg.action == "classify":
        if cfg.jobs > 1 and len(cfg.inputs) > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                reps = list(pool.map(_classify_one, cfg.inputs, [cfg.p] * len(cfg.inputs)))
        else:
            reps = [_classify_one(path, cfg.p) for path in cfg.inputs]
        obj = reps[0] if len(reps) == 1 else reps
        return _emit(obj, cfg.fmt, "".join(_report_text(r) for r in reps))

    model = _load(cfg.inputs[0], cfg.p)
    if cfg.action == "ncd":
        out = minimal_ncd(model)
        return _emit(formats.model_to_json(out), cfg.fmt, _model_summary(out), formats.model_to_dot(out, "ncd"))
    if cfg.action == "blowup":
        if not cfg.at:
            raise ModelError("--at is required")
        out, new_id = blow_up(model, parse_point(cfg.at, model))
        log.info("exceptional curve %s", new_id)
        dot = formats.model_to_dot(model, "before") + formats.model_to_dot(out, "after")
        return _emit(formats.model_to_json(out), cfg.fmt, _model_summary(out), dot)
    if cfg.action == "blowdown":
        if not cfg.component:
            raise ModelError("--component is required")
        if not model.has(cfg.component):
            raise ModelError(f"unknown component {cfg.component!r}")
        out = blow_down(model, cfg.component)
        dot = formats.model_to_dot(model, "before") + formats.model_to_dot(out, "after")
        return _emit(formats.model_to_json(out), cfg.fmt, _model_summary(out), dot)
    if cfg.action == "lreg":
        res = build_lreg(minimal_ncd(model) if model.regular else model)
        obj = {
            "model": formats.model_to_json(res.model),
            "singular_points": [
                {
                    "id": sp.id,
                    "chain_weights": list(sp.chain_weights),
                    "exc": sp.exc_variant,
                    "str": sp.str_variant,
                    "residue_degree": sp.residue.degree,
                    "embedding_dim": sp.embedding_dim,
                }
                for sp in res.singular_points
            ],
            "absolute_minimal": res.absolute_minimal,
        }
        return _emit(obj, cfg.fmt, _model_summary(res.model), formats.model_to_dot(res.model, "lreg"))
    if cfg.action == "esets":
        sets = e_sets(model)
        obj = {label: sorted(getattr(sets, name)) for name, label in sets.LABELS.items()}
        text = "".join(f"{label}: {' '.join(ids) or '-'}\n" for label, ids in obj.items())
        return _emit(obj, cfg.fmt, text)
    if cfg.action == "emin":
        p = model.p if cfg.p is None else cfg.p
        res = build_lreg(minimal_ncd(model))
        value = e_min(res, p)
        return _emit({"p": p, "e_min": value}, cfg.fmt, f"e_min={value}\n")
    raise ModelError(f"unknown model action {cfg.action!r}")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="arithsurf", description="Combinatorics of arithmetic surface models.")
    sub = ap.add_subparsers(dest="command", required=True)

    cone = sub.add_parser("cone", help="rank-2 cone computations")
    cone.add_argument("action", choices=["resolve", "chain", "panels", "star"])
    cone.add_argument("literal", help="JSON literal or path to a JSON file")
    cone.add_argument("--format", dest="fmt", choices=["json", "text"], default="json")

    model = sub.add_parser("model", help="fiber model operations")
    model.add_argument("action", choices=["ncd", "blowup", "blowdown", "lreg", "esets", "classify", "emin"])
    model.add_argument("files", nargs="+")
    model.add_argument("--p", type=int, default=None, help="override the residue characteristic")
    model.add_argument("--at", default=None, help="blow-up center")
    model.add_argument("--component", default=None, help="component to blow down")
    model.add_argument("--format", dest="fmt", choices=["json", "text", "dot"], default="json")
    model.add_argument("--jobs", type=int, default=1)
    model.add_argument("--seed", type=int, default=None)
    return ap


def _config(ns: argparse.Namespace) -> RunConfig:
    if ns.command == "cone":
        return RunConfig("cone", ns.action, (ns.literal,), None, ns.fmt, None, 1)
    if ns.p is not None and not is_prime_or_zero(ns.p):
        raise ModelError(f"--p must be 0 or a prime, got {ns.p}")
    if ns.action != "classify" and len(ns.files) != 1:
        raise ModelError(f"model {ns.action} takes exactly one file")
    return RunConfig("model", ns.action, tuple(ns.files), ns.p, ns.fmt, ns.seed, max(1, ns.jobs), ns.at, ns.component)


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("ARITHSURF_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    ns = _parser().parse_args(argv)
    try:
        cfg = _config(ns)
        out = _cone_command(cfg) if cfg.command == "cone" else _model_command(cfg)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

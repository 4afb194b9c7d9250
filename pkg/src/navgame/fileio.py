"""Persistence: JSON documents, a points CSV, and JSONL trace logs.

Exactness rules carry over to disk: coordinates are integers, general
metric entries are rational strings, floats are rejected on load.  Writers
sort keys and emit compact separators so identical objects serialize to
identical bytes, and every load(save(x)) is x.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .covers import SolveMode
from .dynamics import DynamicsStatus, DynamicsStep, DynamicsTrace
from .metric import EuclideanSpace, GeneralMetric, Space
from .network import Network, StrategyProfile, Variant, undirected_edge
from .undirected import AlgorithmTrace


class FileFormatError(Exception):
    pass


def _as_int(value: Any, what: str) -> int:
    # bool is an int subclass; floats are never silently truncated
    if isinstance(value, bool) or not isinstance(value, int):
        raise FileFormatError(f"{what} must be an exact integer, got {value!r}")
    return value


def _as_fraction(value: Any, what: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FileFormatError(f"{what} must be a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FileFormatError(f"{what}: bad rational {value!r}") from exc
    raise FileFormatError(f"{what} must be a rational string, got {value!r}")


def _dump_json(obj: Any, path: str | Path) -> None:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def _load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc


# ---------------------------------------------------------------------------
# spaces


def space_to_json(space: Space) -> dict:
    if isinstance(space, EuclideanSpace):
        doc: dict[str, Any] = {
            "kind": "euclidean",
            "dimension": space.dimension,
            "scale": space.scale,
            "points": [list(p) for p in space.points],
        }
        if space.labels is not None:
            doc["labels"] = list(space.labels)
        return doc
    if isinstance(space, GeneralMetric):
        doc = {
            "kind": "general",
            "n": space.n,
            "dist": [[str(d) for d in row] for row in space.dist],
        }
        if space.labels is not None:
            doc["labels"] = list(space.labels)
        return doc
    raise FileFormatError(f"cannot serialize space of type {type(space).__name__}")


def space_from_json(doc: Any) -> Space:
    if not isinstance(doc, dict):
        raise FileFormatError("space document must be a JSON object")
    kind = doc.get("kind")
    labels = None
    if "labels" in doc:
        labels = tuple(str(x) for x in doc["labels"])
    if kind == "euclidean":
        points = tuple(
            tuple(_as_int(x, f"point {i} coordinate") for x in p)
            for i, p in enumerate(doc.get("points", ()))
        )
        return EuclideanSpace(
            points,
            dimension=_as_int(doc.get("dimension"), "dimension"),
            scale=_as_int(doc.get("scale", 1), "scale"),
            labels=labels,
        )
    if kind == "general":
        rows = doc.get("dist", ())
        dist = tuple(
            tuple(_as_fraction(x, f"dist[{i}][{j}]") for j, x in enumerate(row))
            for i, row in enumerate(rows)
        )
        if len(dist) != _as_int(doc.get("n"), "n"):
            raise FileFormatError("matrix size does not match n")
        return GeneralMetric(dist, labels=labels)
    raise FileFormatError(f"unknown space kind {kind!r}")


def save_space(space: Space, path: str | Path) -> None:
    _dump_json(space_to_json(space), path)


def load_space(path: str | Path) -> Space:
    return space_from_json(_load_json(path))


def save_points_csv(space: EuclideanSpace, path: str | Path) -> None:
    """Header comment carries dimension and scale; one row of integer
    coordinates per point.  Labels do not fit in this format."""
    if not isinstance(space, EuclideanSpace):
        raise FileFormatError("CSV holds euclidean point sets only")
    if space.labels is not None:
        raise FileFormatError("labelled spaces round-trip via JSON, not CSV")
    lines = [f"# dimension={space.dimension} scale={space.scale}"]
    for p in space.points:
        lines.append(",".join(str(x) for x in p))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_points_csv(path: str | Path) -> EuclideanSpace:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FileFormatError("missing '# dimension=... scale=...' header")
    fields = dict(
        part.split("=", 1) for part in lines[0][1:].split() if "=" in part
    )
    try:
        dimension = int(fields["dimension"])
        scale = int(fields["scale"])
    except (KeyError, ValueError) as exc:
        raise FileFormatError("bad CSV header") from exc
    points = []
    for i, ln in enumerate(lines[1:]):
        try:
            points.append(tuple(int(cell) for cell in ln.split(",")))
        except ValueError as exc:
            raise FileFormatError(f"row {i}: coordinates must be integers") from exc
    return EuclideanSpace(tuple(points), dimension=dimension, scale=scale)


# ---------------------------------------------------------------------------
# profiles and networks


def profile_to_json(profile: StrategyProfile) -> dict:
    return {
        "kind": "profile",
        "variant": profile.variant.value,
        "n": len(profile.strategies),
        "strategies": [sorted(s) for s in profile.strategies],
    }


def profile_from_json(doc: Any) -> StrategyProfile:
    if not isinstance(doc, dict) or doc.get("kind") != "profile":
        raise FileFormatError("not a profile document")
    n = _as_int(doc.get("n"), "n")
    raw = doc.get("strategies")
    if not isinstance(raw, list) or len(raw) != n:
        raise FileFormatError("strategies must list one entry per agent")
    strategies = []
    for u, members in enumerate(raw):
        parsed = frozenset(_as_int(v, f"strategy of {u}") for v in members)
        if any(not 0 <= v < n for v in parsed):
            raise FileFormatError(f"strategy of {u} references unknown agents")
        strategies.append(parsed)
    return StrategyProfile(Variant(doc.get("variant")), tuple(strategies))


def save_profile(profile: StrategyProfile, path: str | Path) -> None:
    _dump_json(profile_to_json(profile), path)


def load_profile(path: str | Path) -> StrategyProfile:
    return profile_from_json(_load_json(path))


def network_to_json(network: Network) -> dict:
    doc: dict[str, Any] = {
        "kind": "network",
        "variant": network.variant.value,
        "n": network.n,
        "edges": [list(e) for e in sorted(network.edges)],
    }
    if network.ownership is None:
        doc["ownership"] = None
    else:
        doc["ownership"] = [
            [e[0], e[1], owner] for e, owner in sorted(network.ownership.items())
        ]
    return doc


def network_from_json(doc: Any) -> Network:
    if not isinstance(doc, dict) or doc.get("kind") != "network":
        raise FileFormatError("not a network document")
    n = _as_int(doc.get("n"), "n")
    variant = Variant(doc.get("variant"))
    edges = set()
    for i, e in enumerate(doc.get("edges", ())):
        if not isinstance(e, list) or len(e) != 2:
            raise FileFormatError(f"edge {i} must be a pair")
        edges.add((_as_int(e[0], "edge end"), _as_int(e[1], "edge end")))
    ownership = None
    raw = doc.get("ownership")
    if raw is not None:
        ownership = {}
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) != 3:
                raise FileFormatError(f"ownership {i} must be [u, v, owner]")
            u, v, owner = (_as_int(x, "ownership entry") for x in item)
            key = undirected_edge(u, v) if variant is Variant.UNDIRECTED else (u, v)
            ownership[key] = owner
    return Network(variant, n, frozenset(edges), ownership)


def save_network(network: Network, path: str | Path) -> None:
    _dump_json(network_to_json(network), path)


def load_network(path: str | Path) -> Network:
    return network_from_json(_load_json(path))


def load_document(path: str | Path) -> Space | StrategyProfile | Network:
    """Dispatch a JSON document by its "kind" field."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise FileFormatError("expected a JSON object")
    kind = doc.get("kind")
    if kind in ("euclidean", "general"):
        return space_from_json(doc)
    if kind == "profile":
        return profile_from_json(doc)
    if kind == "network":
        return network_from_json(doc)
    raise FileFormatError(f"unknown document kind {kind!r}")


# ---------------------------------------------------------------------------
# trace logs (JSONL: one header line, then one line per step/record)


def _dump_jsonl(lines: list[dict], path: str | Path) -> None:
    text = "".join(
        json.dumps(ln, sort_keys=True, separators=(",", ":")) + "\n" for ln in lines
    )
    Path(path).write_text(text, encoding="utf-8")


def _load_jsonl(path: str | Path) -> list[Any]:
    out = []
    for i, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines()
    ):
        if not raw.strip():
            continue
        try:
            out.append(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}:{i + 1}: not valid JSON") from exc
    if not out:
        raise FileFormatError(f"{path}: empty trace file")
    return out


def save_dynamics_trace(trace: DynamicsTrace, path: str | Path) -> None:
    header = {
        "type": "dynamics-trace",
        "schedule": trace.schedule,
        "variant": trace.variant,
        "initial": [sorted(s) for s in trace.initial.strategies],
        "final": [sorted(s) for s in trace.final.strategies],
        "initial_fingerprint": trace.initial_fingerprint,
        "status": trace.status.value,
        "first_repeat": trace.first_repeat,
        "certified": trace.certified,
    }
    lines = [header]
    for s in trace.steps:
        lines.append(
            {
                "step": s.step,
                "agent": s.agent,
                "action": s.action,
                "old_size": s.old_size,
                "new_size": s.new_size,
                "old_cost": s.old_cost,
                "new_cost": s.new_cost,
                "fingerprint": s.fingerprint,
                "mode": s.mode.value,
            }
        )
    _dump_jsonl(lines, path)


def load_dynamics_trace(path: str | Path) -> DynamicsTrace:
    lines = _load_jsonl(path)
    header, step_lines = lines[0], lines[1:]
    if header.get("type") != "dynamics-trace":
        raise FileFormatError("not a dynamics trace")
    variant = Variant(header["variant"])
    profiles = []
    for key in ("initial", "final"):
        profiles.append(
            StrategyProfile(
                variant,
                tuple(
                    frozenset(_as_int(v, "strategy member") for v in s)
                    for s in header[key]
                ),
            )
        )
    steps = tuple(
        DynamicsStep(
            step=_as_int(ln["step"], "step"),
            agent=_as_int(ln["agent"], "agent"),
            action=str(ln["action"]),
            old_size=_as_int(ln["old_size"], "old_size"),
            new_size=_as_int(ln["new_size"], "new_size"),
            old_cost=None if ln["old_cost"] is None else _as_int(ln["old_cost"], "c"),
            new_cost=None if ln["new_cost"] is None else _as_int(ln["new_cost"], "c"),
            fingerprint=str(ln["fingerprint"]),
            mode=SolveMode(ln["mode"]),
        )
        for ln in step_lines
    )
    return DynamicsTrace(
        schedule=str(header["schedule"]),
        variant=variant.value,
        initial=profiles[0],
        final=profiles[1],
        initial_fingerprint=str(header["initial_fingerprint"]),
        steps=steps,
        status=DynamicsStatus(header["status"]),
        first_repeat=(
            None
            if header["first_repeat"] is None
            else _as_int(header["first_repeat"], "first_repeat")
        ),
        certified=bool(header["certified"]),
    )


def save_algorithm_trace(trace: AlgorithmTrace, path: str | Path) -> None:
    header = {
        "type": "algorithm-trace",
        "mode": trace.mode,
        "delta_rule": trace.delta_rule,
        "iterations": trace.iterations,
        "certified": trace.certified,
    }
    _dump_jsonl([header, *map(dict, trace.records)], path)


def load_algorithm_trace(path: str | Path) -> AlgorithmTrace:
    lines = _load_jsonl(path)
    header, records = lines[0], lines[1:]
    if header.get("type") != "algorithm-trace":
        raise FileFormatError("not an algorithm trace")
    return AlgorithmTrace(
        mode=str(header["mode"]),
        delta_rule=str(header["delta_rule"]),
        records=tuple(records),
        iterations=_as_int(header["iterations"], "iterations"),
        certified=bool(header["certified"]),
    )

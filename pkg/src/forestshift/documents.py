"""JSON documents for forests, weights and analysis reports.

Layout::

    {"core": {"vertices": [...], "parent": {"child": "parent", ...}},
     "rays": [{"id": "r", "attach": "x"}, ...],
     "weights": {"x": 0, "u": "3/2", ...},
     "ray_weights": {"r": {"prefix": [...], "tail": 2}}}

Scalars: JSON integers and floats map to ``int``/``float``, strings such as
``"3/4"`` or ``"0.25"`` to exact ``Fraction``, and ``[re, im]`` pairs to
``complex``.  Ray vertices are written ``"<ray>.<n>"``.  Rays may carry the
optional keys ``start``, ``step``, ``period`` and ``live`` (produced by
transforms); ray weights may give ``"cycle": [...]`` instead of ``"tail"``.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

from .errors import DocumentError
from .forest import Forest, RayVertex, Tail, vertex_key
from .shift import RayProfile, WeightSystem, validate_weights


def parse_scalar(x):
    if isinstance(x, bool):
        raise DocumentError(f"boolean {x!r} is not a weight")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"cannot read {x!r} as a rational number") from None
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(y, (int, float)) and not isinstance(y, bool) for y in x
    ):
        return complex(x[0], x[1])
    raise DocumentError(f"cannot read {x!r} as a scalar")


def dump_scalar(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        return x
    return float(x)


def vertex_name(v) -> Any:
    return str(v) if isinstance(v, RayVertex) else v


class _Resolver:
    def __init__(self, vertices, ray_ids):
        self.by_name = {}
        for v in vertices:
            if str(v) in self.by_name:
                raise DocumentError(f"duplicate vertex label {v!r}")
            self.by_name[str(v)] = v
        self.ray_ids = set(ray_ids)

    def __call__(self, name, where):
        key = str(name)
        if key in self.by_name:
            return self.by_name[key]
        rid, dot, idx = key.rpartition(".")
        if dot and rid in self.ray_ids and idx.isdigit() and int(idx) >= 1:
            return RayVertex(rid, int(idx))
        raise DocumentError(f"{where}: unknown vertex {name!r}")

    def maybe(self, name):
        """Resolve when possible; unknown names pass through for validation to reject."""
        try:
            return self(name, "")
        except DocumentError:
            return name


def _need(obj, key, kind, where):
    if key not in obj:
        raise DocumentError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise DocumentError(f"{where}.{key}: expected {kind.__name__ if isinstance(kind, type) else kind}")
    return val


def forest_from_dict(doc: dict) -> Forest:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    core = _need(doc, "core", dict, "document")
    vertices = _need(core, "vertices", list, "core")
    raw_parent = _need(core, "parent", dict, "core")
    for v in vertices:
        if not isinstance(v, (str, int)) or isinstance(v, bool):
            raise DocumentError(f"core.vertices: label {v!r} must be a string or integer")
    rays = doc.get("rays", [])
    if not isinstance(rays, list):
        raise DocumentError("rays: expected a list")
    tails = {}
    specs = []
    for i, r in enumerate(rays):
        if not isinstance(r, dict):
            raise DocumentError(f"rays[{i}]: expected an object")
        rid = _need(r, "id", str, f"rays[{i}]")
        if rid in tails:
            raise DocumentError(f"rays[{i}]: duplicate ray id {rid!r}")
        if "attach" not in r:
            raise DocumentError(f"rays[{i}]: missing key 'attach'")
        tails[rid] = None
        specs.append((rid, r))
    resolve = _Resolver(vertices, tails)
    for rid, r in specs:
        try:
            shape = [int(r.get(k, d)) for k, d in (("start", 1), ("step", 1), ("period", 1))]
            live = frozenset(int(c) for c in r.get("live", [0]))
        except (TypeError, ValueError):
            raise DocumentError(f"ray {rid}: start/step/period/live must be integers") from None
        tails[rid] = Tail(resolve.maybe(r["attach"]), *shape, live)
    parent = {}
    for key, val in raw_parent.items():
        parent[resolve(key, "core.parent")] = resolve.maybe(val)
    for v in vertices:
        if v not in parent:
            raise DocumentError(f"core.parent: no parent given for {v!r}")
    return Forest(parent, tails)


def weights_from_dict(doc: dict, forest: Forest) -> WeightSystem | None:
    if "weights" not in doc and "ray_weights" not in doc:
        return None
    raw = doc.get("weights", {})
    if not isinstance(raw, dict):
        raise DocumentError("weights: expected an object")
    by_name = {str(v): v for v in forest.core}
    core = {}
    for k, x in raw.items():
        core[by_name.get(k, k)] = parse_scalar(x)
    rays = {}
    raw_rays = doc.get("ray_weights", {})
    if not isinstance(raw_rays, dict):
        raise DocumentError("ray_weights: expected an object")
    for rid, prof in raw_rays.items():
        if isinstance(prof, dict):
            prefix = tuple(parse_scalar(x) for x in prof.get("prefix", []))
            if "cycle" in prof:
                cycle = tuple(parse_scalar(x) for x in prof["cycle"])
            elif "tail" in prof:
                cycle = (parse_scalar(prof["tail"]),)
            else:
                raise DocumentError(f"ray_weights.{rid}: needs 'tail' or 'cycle'")
            if not cycle:
                raise DocumentError(f"ray_weights.{rid}: empty cycle")
            rays[rid] = RayProfile(prefix, cycle)
        else:
            rays[rid] = RayProfile.constant(parse_scalar(prof))
    return validate_weights(forest, WeightSystem(core, rays))


def load_document(text: str) -> tuple[Forest, WeightSystem | None]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    forest = forest_from_dict(doc)
    return forest, weights_from_dict(doc, forest)


def forest_to_dict(forest: Forest, lam: WeightSystem | None = None) -> dict:
    explicit = forest.explicit
    doc: dict = {
        "core": {
            "vertices": [v for v in explicit if not isinstance(v, RayVertex)],
            "parent": {str(vertex_name(v)): vertex_name(forest.parent(v)) for v in explicit},
        },
        "rays": [],
    }
    for rid in sorted(forest.ray_ids):
        t = forest.tails[rid]
        entry = {"id": rid, "attach": vertex_name(t.attach)}
        if (t.start, t.step, t.period, t.live) != (1, 1, 1, frozenset({0})):
            entry.update(start=t.start, step=t.step, period=t.period, live=sorted(t.live))
        doc["rays"].append(entry)
    if lam is not None:
        doc["weights"] = {str(v): dump_scalar(lam.core[v])
                          for v in sorted(forest.core, key=vertex_key)}
        doc["ray_weights"] = {}
        for rid in sorted(forest.ray_ids):
            p = lam.rays[rid]
            out = {"prefix": [dump_scalar(x) for x in p.prefix]}
            if len(p.cycle) == 1:
                out["tail"] = dump_scalar(p.cycle[0])
            else:
                out["cycle"] = [dump_scalar(x) for x in p.cycle]
            doc["ray_weights"][rid] = out
    return doc


def dump_document(forest: Forest, lam: WeightSystem | None = None) -> str:
    return json.dumps(forest_to_dict(forest, lam), indent=2, sort_keys=False)


def jsonable(x):
    """Convert analysis values (Fractions, infinities, vertices) into JSON-safe values."""
    if isinstance(x, RayVertex):
        return str(x)
    if isinstance(x, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [jsonable(y) for y in x]
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, (Fraction, complex)):
        return dump_scalar(x)
    return x

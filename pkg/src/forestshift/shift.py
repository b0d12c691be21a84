"""Weighted shifts on forests.

The shift with weights ``lam`` sends the basis vector ``e_v`` to
``sum(lam[c] * e_c for c in children(v))``; on functions it reads
``(S f)(v) = lam[v] * f(parent(v))``.  Roots always carry weight zero.

Ray weights are eventually periodic (:class:`RayProfile`), so every
supremum and every per-vertex condition over an infinite ray reduces to a
finite range of indices; :func:`ray_horizon` gives that range.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    MissingWeight,
    NonzeroRootWeight,
    UnboundedWeights,
    UnknownVertex,
    ValidationError,
    WindowEmpty,
)
from .forest import Forest, RayVertex, Tail, _lcm, vertex_key
from .order import forest_power

__all__ = [
    "RayProfile",
    "WeightSystem",
    "TruncationWindow",
    "abs_sq",
    "validate_weights",
    "is_proper",
    "bound_norm_sq",
    "local_norm_sq",
    "apply_shift",
    "apply_adjoint",
    "inner",
    "norm_sq",
    "make_window",
    "depth_window",
    "materialize",
    "prune_zero_weights",
    "power_weights",
    "ray_horizon",
    "probe_parents",
]


def abs_sq(x):
    """``|x|**2`` that stays exact for ints and Fractions."""
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    return x * x


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class RayProfile:
    """Weights along one ray: ``prefix`` for indices ``1..len(prefix)``, then ``cycle`` repeated."""

    prefix: tuple = ()
    cycle: tuple = (0,)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        cyc = self.cycle if isinstance(self.cycle, (tuple, list)) else (self.cycle,)
        if not cyc:
            raise ValidationError("ray weight cycle must be non-empty")
        object.__setattr__(self, "cycle", tuple(cyc))

    @classmethod
    def constant(cls, value, prefix=()):
        return cls(tuple(prefix), (value,))

    def weight(self, n: int):
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - len(self.prefix) - 1) % len(self.cycle)]

    def values(self):
        return self.prefix + self.cycle


@dataclass(frozen=True)
class WeightSystem:
    core: Mapping = field(default_factory=dict)
    rays: Mapping = field(default_factory=dict)

    def __call__(self, v):
        if isinstance(v, RayVertex):
            try:
                return self.rays[v.ray].weight(v.index)
            except KeyError:
                raise UnknownVertex(v) from None
        try:
            return self.core[v]
        except (KeyError, TypeError):
            raise UnknownVertex(v) from None

    @property
    def is_exact(self) -> bool:
        vals = list(self.core.values())
        for p in self.rays.values():
            vals.extend(p.values())
        return all(_is_exact(x) for x in vals)

    @property
    def is_complex(self) -> bool:
        vals = list(self.core.values())
        for p in self.rays.values():
            vals.extend(p.values())
        return any(isinstance(x, complex) for x in vals)

    def scaled(self, factor) -> "WeightSystem":
        return WeightSystem(
            {v: factor * w for v, w in self.core.items()},
            {r: RayProfile(tuple(factor * w for w in p.prefix), tuple(factor * w for w in p.cycle))
             for r, p in self.rays.items()},
        )

    def __eq__(self, other):
        if not isinstance(other, WeightSystem):
            return NotImplemented
        if dict(self.core) != dict(other.core) or self.rays.keys() != other.rays.keys():
            return False
        for r, p in self.rays.items():
            q = other.rays[r]
            n = max(len(p.prefix), len(q.prefix)) + _lcm(len(p.cycle), len(q.cycle))
            if any(p.weight(i) != q.weight(i) for i in range(1, n + 1)):
                return False
        return True

    __hash__ = None


def ray_horizon(forest: Forest, lam: WeightSystem, rid: str) -> tuple[int, int]:
    """``(H, L)``: from index ``H`` on, structure and weights of the ray repeat with period ``L``."""
    t = forest.tails[rid]
    p = lam.rays[rid]
    return max(t.start, len(p.prefix) + 1), _lcm(t.step, t.period, len(p.cycle))


def probe_parents(forest: Forest, lam: WeightSystem) -> Iterator:
    """Vertices whose local data determine every per-vertex quantity of the shift."""
    yield from forest.explicit
    for rid in sorted(forest.ray_ids):
        h, l = ray_horizon(forest, lam, rid)
        start = forest.tails[rid].start
        for n in range(start, h + 2 * l):
            yield RayVertex(rid, n)


def validate_weights(forest: Forest, core=None, rays=None) -> WeightSystem:
    """Check a weight system against a forest.

    Accepts either a :class:`WeightSystem` as ``core`` or raw mappings; ray
    profiles may be given as :class:`RayProfile`, a scalar (constant tail) or
    a ``{"prefix": [...], "tail": x}`` / ``{"prefix": [...], "cycle": [...]}`` dict.
    """
    if isinstance(core, WeightSystem):
        lam = core
    else:
        profiles = {}
        for rid, prof in (rays or {}).items():
            if isinstance(prof, RayProfile):
                profiles[rid] = prof
            elif isinstance(prof, Mapping):
                cyc = prof.get("cycle", prof.get("tail"))
                if cyc is None:
                    raise MissingWeight(f"tail of ray {rid}")
                profiles[rid] = RayProfile(tuple(prof.get("prefix", ())), cyc)
            else:
                profiles[rid] = RayProfile.constant(prof)
        lam = WeightSystem(dict(core or {}), profiles)
    for v in sorted(forest.core, key=vertex_key):
        if v not in lam.core:
            raise MissingWeight(v)
    for v in lam.core:
        if v not in forest.core:
            raise UnknownVertex(v)
    for rid in sorted(forest.ray_ids):
        if rid not in lam.rays:
            raise MissingWeight(f"ray {rid}")
    for rid in lam.rays:
        if rid not in forest.ray_ids:
            raise UnknownVertex(rid)
    vals = list(lam.core.values())
    for p in lam.rays.values():
        vals.extend(p.values())
    for x in vals:
        if not isinstance(x, Number) or isinstance(x, bool):
            raise ValidationError(f"weight {x!r} is not a number")
        if not cmath.isfinite(complex(x)):
            raise UnboundedWeights(f"weight {x!r} is not finite")
    for v in probe_parents(forest, lam):
        if forest.is_root(v) and lam(v) != 0:
            raise NonzeroRootWeight(v, lam(v))
    # explicit ray vertices below the tail start
    for v in forest.explicit:
        if isinstance(v, RayVertex) and forest.is_root(v) and lam(v) != 0:
            raise NonzeroRootWeight(v, lam(v))
    return lam


def is_proper(forest: Forest, lam: WeightSystem) -> bool:
    """Zero weights sit exactly on the roots."""
    return all((lam(v) == 0) == forest.is_root(v) for v in probe_parents(forest, lam))


def local_norm_sq(forest: Forest, lam: WeightSystem, v):
    """``||S e_v||**2``."""
    return sum((abs_sq(lam(c)) for c in forest.children(v)), 0)


def bound_norm_sq(forest: Forest, lam: WeightSystem):
    """Supremum of ``||S e_v||**2`` over all vertices (finite iff the shift is bounded)."""
    return max(local_norm_sq(forest, lam, v) for v in probe_parents(forest, lam))


# -- finitely supported vectors ----------------------------------------------

def apply_shift(forest: Forest, lam: WeightSystem, f: Mapping) -> dict:
    out: dict = {}
    for v, x in f.items():
        if x == 0:
            continue
        for c in forest.children(v):
            out[c] = out.get(c, 0) + lam(c) * x
    return {v: x for v, x in out.items() if x != 0}


def apply_adjoint(forest: Forest, lam: WeightSystem, f: Mapping) -> dict:
    out: dict = {}
    for u, x in f.items():
        w = lam(u)
        if x == 0 or w == 0:
            continue
        p = forest.parent(u)
        out[p] = out.get(p, 0) + w.conjugate() * x
    return {v: x for v, x in out.items() if x != 0}


def inner(f: Mapping, g: Mapping):
    return sum((f[v] * g[v].conjugate() for v in f.keys() & g.keys()), 0)


def norm_sq(f: Mapping):
    return sum((abs_sq(x) for x in f.values()), 0)


# -- matrices on finite windows ----------------------------------------------

@dataclass(frozen=True)
class TruncationWindow:
    """Ordered finite vertex set; ``ragged`` lists non-roots whose parent lies outside."""

    vertices: tuple
    ragged: frozenset = frozenset()

    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in set(self.vertices)


def make_window(forest: Forest, vertices) -> TruncationWindow:
    vs = tuple(sorted(set(vertices), key=vertex_key))
    for v in vs:
        if v not in forest:
            raise UnknownVertex(v)
    inside = set(vs)
    ragged = frozenset(v for v in vs if not forest.is_root(v) and forest.parent(v) not in inside)
    return TruncationWindow(vs, ragged)


def depth_window(forest: Forest, lam: WeightSystem | None = None, depth: int = 8) -> TruncationWindow:
    """Explicit vertices plus ``depth`` full periods of every ray tail (parent-closed)."""
    vs = list(forest.explicit)
    for rid in sorted(forest.ray_ids):
        t = forest.tails[rid]
        if lam is None:
            h, l = t.start, _lcm(t.step, t.period)
        else:
            h, l = ray_horizon(forest, lam, rid)
        vs.extend(RayVertex(rid, n) for n in range(t.start, h + depth * l))
    return make_window(forest, vs)


def _dtype(lam: WeightSystem):
    return complex if lam.is_complex else float


def materialize(forest: Forest, lam: WeightSystem, window: TruncationWindow) -> np.ndarray:
    """Matrix of the compressed shift: ``M[i, j] = lam(w_i)`` when ``parent(w_i) = w_j``."""
    if len(window) == 0:
        raise WindowEmpty("window has no vertices")
    idx = window.index()
    m = np.zeros((len(window), len(window)), dtype=_dtype(lam))
    for i, v in enumerate(window.vertices):
        if forest.is_root(v):
            continue
        j = idx.get(forest.parent(v))
        if j is not None:
            m[i, j] = lam(v)
    return m


# -- transforms ---------------------------------------------------------------

def prune_zero_weights(forest: Forest, lam: WeightSystem) -> tuple[Forest, WeightSystem]:
    """Turn every zero-weight vertex into a root; the operator is unchanged."""
    f = forest
    horizons = {rid: ray_horizon(forest, lam, rid) for rid in forest.ray_ids}
    for rid, (h, _) in horizons.items():
        f = f.unroll(rid, h)
    cuts = {v: v for v in f.explicit if not f.is_root(v) and lam(v) == 0}
    parent = {v: f.parent(v) for v in f.explicit}
    parent.update(cuts)
    tails = {}
    for rid, t in f.tails.items():
        period = _lcm(t.period, len(lam.rays[rid].cycle))
        live = frozenset(
            c for c in range(period)
            if t.is_live(n := t.start + (c - t.start) % period) and lam(RayVertex(rid, n)) != 0
        )
        tails[rid] = Tail(t.attach, t.start, t.step, period, live)
    return Forest(parent, tails), lam


def _path_product(forest: Forest, lam: WeightSystem, v, k: int):
    out = 1
    for _ in range(k):
        w = lam(v)
        if w == 0:
            return 0 * w
        out = out * w
        v = forest.parent(v)
    return out


def power_weights(forest: Forest, lam: WeightSystem, k: int) -> tuple[Forest, WeightSystem]:
    """The ``k``-th power of the shift, as a shift on the ``k``-th power forest.

    The weight of ``v`` is the product of the weights along ``v, p(v), ..., p^{k-1}(v)``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    fk = forest_power(forest, k)
    if k == 1:
        return fk, lam
    core = {v: _path_product(forest, lam, v, k) for v in forest.core}
    rays = {}
    for rid, t in forest.tails.items():
        prof = lam.rays[rid]
        b = max(t.start, len(prof.prefix) + 1) + (k - 1) * t.step
        clen = len(prof.cycle)
        prefix = tuple(_path_product(forest, lam, RayVertex(rid, n), k) for n in range(1, b))
        cycle = tuple(_path_product(forest, lam, RayVertex(rid, n), k) for n in range(b, b + clen))
        rays[rid] = RayProfile(prefix, cycle)
    return fk, WeightSystem(core, rays)

"""Thickness order on forests sharing a vertex set, plus powers and leafless supports."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .errors import (
    MaskHitsRoot,
    PreconditionFailed,
    TooLarge,
    UnknownVertex,
    VertexSetMismatch,
)
from .forest import Forest, RayVertex, Tail, probe_vertices, vertex_key

__all__ = [
    "ThinningMask",
    "apply_mask",
    "is_thinner",
    "thinner_via_children",
    "enumerate_thinner",
    "strictly_thicker",
    "forest_power",
    "power_preserves_thickness_check",
    "leafless_support",
    "thin_fork_check",
]


@dataclass(frozen=True)
class ThinningMask:
    """Non-root vertices whose parent edge is cut."""

    cut_set: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "cut_set", frozenset(self.cut_set))


def apply_mask(forest: Forest, mask: ThinningMask | set | frozenset) -> Forest:
    cut = mask.cut_set if isinstance(mask, ThinningMask) else frozenset(mask)
    for v in cut:
        if v not in forest:
            raise UnknownVertex(v)
        if forest.is_root(v):
            raise MaskHitsRoot(v)
    if not cut:
        return forest
    f = forest.ensure_explicit(cut)
    return f.with_parents({v: v for v in cut})


def _check_same(f1: Forest, f2: Forest):
    if not f1.same_vertex_set(f2):
        raise VertexSetMismatch("forests are defined on different vertex sets")


def is_thinner(f1: Forest, f2: Forest) -> bool:
    """``f1 << f2``: each vertex keeps its ``f2``-parent or is an ``f1``-root."""
    _check_same(f1, f2)
    for v in probe_vertices(f1, f2):
        p1 = f1.parent(v)
        if p1 != v and p1 != f2.parent(v):
            return False
    return True


def thinner_via_children(f1: Forest, f2: Forest) -> bool:
    """Same relation, decided by child-set inclusion."""
    _check_same(f1, f2)
    return all(f1.children(v) <= f2.children(v) for v in probe_vertices(f1, f2))


def enumerate_thinner(forest: Forest, cap: int = 1 << 16) -> Iterator[Forest]:
    """Every forest obtained by cutting a subset of the explicit non-roots.

    For finite forests this is the full set of thinner forests.
    """
    movable = [v for v in forest.explicit if not forest.is_root(v)]
    if 2 ** len(movable) > cap:
        raise TooLarge(f"{2 ** len(movable)} thinner forests exceed cap {cap}")
    for r in range(len(movable) + 1):
        for cut in combinations(movable, r):
            yield apply_mask(forest, cut)


def strictly_thicker(forest: Forest) -> Forest | None:
    """Re-parent the smallest root under the smallest vertex of another tree.

    Returns ``None`` when the forest is a single tree.
    """
    roots = sorted(forest.roots(), key=vertex_key)
    omega = roots[0]
    for v in forest.explicit:
        if forest.root_of(v) != omega:
            return forest.with_parents({omega: v})
    # explicit part is one tree; anything else hangs below a dead tail vertex
    for rid in sorted(forest.ray_ids):
        t = forest.tails[rid]
        for n in range(t.start, t.start + t.period):
            if not t.is_live(n):
                f = forest.unroll(rid, n + 1)
                return f.with_parents({omega: RayVertex(rid, n)})
    return None


def _power_tail(t: Tail, k: int) -> Tail:
    live = frozenset(
        c for c in range(t.period)
        if all((c - j * t.step) % t.period in t.live for j in range(k))
    )
    return Tail(t.attach, t.start + (k - 1) * t.step, k * t.step, t.period, live)


def forest_power(forest: Forest, k: int) -> Forest:
    """The forest whose parent is the ``k``-fold parent, or the vertex itself
    when a root is met before ``k - 1`` steps are taken.

    Ray ids are kept; each ray's tail gets step ``k * step`` so the ``k``
    interleaved residue chains stay inside one tail description.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return forest
    f = forest
    for rid, t in forest.tails.items():
        f = f.unroll(rid, t.start + (k - 1) * t.step)
    parent = {}
    for v in f.explicit:
        w = f.iterate(v, k - 1)
        parent[v] = v if f.is_root(w) else f.parent(w)
    tails = {rid: _power_tail(t, k) for rid, t in forest.tails.items()}
    return Forest(parent, tails)


def power_preserves_thickness_check(f1: Forest, f2: Forest, k: int) -> bool:
    if not is_thinner(f1, f2):
        raise PreconditionFailed("first forest is not thinner than the second")
    return is_thinner(forest_power(f1, k), forest_power(f2, k))


def leafless_support(forest: Forest) -> Forest:
    """Thickest leafless forest thinner than ``forest``.

    A vertex keeps its parent exactly when it is not a root and an infinite
    child chain starts at it.
    """
    parent = {
        v: (p if v != p and forest.has_infinite_chain_below(v) else v)
        for v, p in ((v, forest.parent(v)) for v in forest.explicit)
    }
    tails = {}
    for rid, t in forest.tails.items():
        live = frozenset(c for c in t.live if t.chain_is_infinite(c))
        tails[rid] = Tail(t.attach, t.start, t.step, t.period, live)
    return Forest(parent, tails)


def thin_fork_check(thick: Forest, thin: Forest) -> bool:
    """A leafless forest thinner than a forkless one is forkless."""
    if not is_thinner(thin, thick):
        raise PreconditionFailed("second forest is not thinner than the first")
    if not thin.is_leafless():
        raise PreconditionFailed("thin forest is not leafless")
    if not thick.is_forkless():
        raise PreconditionFailed("thick forest is not forkless")
    return thin.is_forkless()

"""Directed forests: a finite explicit part plus periodic infinite ray tails.

A forest is a pair ``(V, p)`` where every periodic point of the parent
function ``p`` is a fixed point.  Infinite forests are presented finitely:

* an *explicit* part, a finite parent map whose keys are core labels and
  possibly some leading ray vertices ``RayVertex(r, n)``;
* for every ray ``r`` a :class:`Tail` describing all ray vertices with index
  ``n >= tail.start``.  A tail vertex either keeps the parent
  ``RayVertex(r, n - step)`` (index ``0`` stands for the attach vertex) or is
  a root, depending on ``n % period``.

Documents only ever produce tails with ``start = step = period = 1``; the
general shape is what makes powers, prunings and thinnings of such forests
representable again without renaming any vertex.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import reduce
from typing import Hashable, Iterable, Iterator, Mapping

from .errors import (
    BadAttach,
    CycleError,
    DanglingParent,
    InfiniteResult,
    LabelClash,
    RaysUnsupported,
    UnknownVertex,
    ValidationError,
)

__all__ = [
    "RayVertex",
    "Tail",
    "Forest",
    "TreeHandle",
    "Descendants",
    "validate_forest",
    "direct_sum",
    "canonical_form",
    "is_isomorphic",
    "vertex_key",
    "probe_vertices",
]


@dataclass(frozen=True, order=True)
class RayVertex:
    """The ``index``-th vertex (counted from 1) below the attach point of a ray."""

    ray: str
    index: int

    def __str__(self):
        return f"{self.ray}.{self.index}"


def vertex_key(v):
    """Deterministic sort key across core labels of mixed types and ray vertices."""
    if isinstance(v, RayVertex):
        return (1, v.ray, v.index, "")
    if isinstance(v, (int, str)) or (
        isinstance(v, tuple) and all(isinstance(x, (int, str)) for x in v)
    ):
        return (0, type(v).__name__, v, "")
    return (0, type(v).__name__, repr(v), "")


def _lcm(*xs: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


@dataclass(frozen=True)
class Tail:
    """Implicit part of one ray.

    Vertex ``RayVertex(ray, n)`` with ``n >= start`` is a root when
    ``n % period`` is not in ``live``; otherwise its parent is
    ``RayVertex(ray, n - step)``, where index ``0`` denotes ``attach``.
    """

    attach: Hashable
    start: int = 1
    step: int = 1
    period: int = 1
    live: frozenset = frozenset({0})

    def __post_init__(self):
        object.__setattr__(self, "live", frozenset(self.live))
        if self.step < 1 or self.period < 1:
            raise ValidationError("tail step and period must be positive")
        if self.start < self.step:
            raise ValidationError("tail start must be at least its step")
        if not all(0 <= c < self.period for c in self.live):
            raise ValidationError("live residues must lie in range(period)")

    def is_live(self, n: int) -> bool:
        return n % self.period in self.live

    @property
    def all_live(self) -> bool:
        return len(self.live) == self.period

    def chain_is_infinite(self, n: int) -> bool:
        """Whether every vertex strictly below index ``n`` in this tail is live."""
        return all(self.is_live(n + j * self.step) for j in range(1, self.period + 1))


@dataclass(frozen=True)
class Descendants:
    vertices: frozenset
    infinite: bool


class Forest:
    """An immutable directed forest.

    ``parent`` maps every explicit vertex to its parent (an explicit vertex);
    ``tails`` maps ray ids to :class:`Tail`.  Validation runs on construction.
    """

    __slots__ = ("_parent", "_tails", "_core", "_kids", "_chain")

    def __init__(self, parent: Mapping, tails: Mapping[str, Tail] | None = None):
        self._parent = dict(parent)
        self._tails = dict(tails or {})
        self._core = frozenset(v for v in self._parent if not isinstance(v, RayVertex))
        self._kids = None
        self._chain = None
        self._validate()

    # -- construction helpers -------------------------------------------------

    def _validate(self):
        if not self._parent:
            raise ValidationError("a forest needs at least one vertex")
        for rid, t in self._tails.items():
            if not isinstance(t, Tail):
                raise ValidationError(f"ray {rid!r}: expected a Tail, got {t!r}")
            if t.attach not in self._core:
                raise BadAttach(rid, t.attach)
            for n in range(1, t.start):
                if RayVertex(rid, n) not in self._parent:
                    raise ValidationError(f"ray vertex {rid}.{n} precedes the tail but is missing")
        for v, p in self._parent.items():
            if isinstance(v, RayVertex):
                t = self._tails.get(v.ray)
                if t is None:
                    raise ValidationError(f"{v} belongs to an unknown ray")
                if not 1 <= v.index < t.start:
                    raise ValidationError(f"{v} lies inside the implicit tail of its ray")
            if p not in self._parent:
                raise DanglingParent(v, p)
        self._scan_cycles()

    def _scan_cycles(self):
        state = {}
        for v0 in self._parent:
            if v0 in state:
                continue
            path, v = [], v0
            while v not in state:
                state[v] = 1
                path.append(v)
                v = self._parent[v]
            if state[v] == 1:
                cycle = path[path.index(v):]
                if len(cycle) > 1:
                    raise CycleError(cycle)
            for u in path:
                state[u] = 2

    def _evolve(self, parent=None, tails=None) -> "Forest":
        return Forest(self._parent if parent is None else parent,
                      self._tails if tails is None else tails)

    # -- basic access ---------------------------------------------------------

    @property
    def core(self) -> frozenset:
        """Core labels (explicit vertices that are not ray vertices)."""
        return self._core

    @property
    def tails(self) -> Mapping[str, Tail]:
        return dict(self._tails)

    @property
    def ray_ids(self) -> frozenset:
        return frozenset(self._tails)

    @property
    def explicit(self) -> tuple:
        """Explicit vertices in deterministic order."""
        return tuple(sorted(self._parent, key=vertex_key))

    @property
    def is_finite(self) -> bool:
        return not self._tails

    def __contains__(self, v) -> bool:
        if v in self._parent:
            return True
        if isinstance(v, RayVertex):
            t = self._tails.get(v.ray)
            return t is not None and v.index >= t.start
        return False

    def _require(self, v):
        if v not in self:
            raise UnknownVertex(v)

    def parent(self, v):
        try:
            return self._parent[v]
        except (KeyError, TypeError):
            pass
        if isinstance(v, RayVertex):
            t = self._tails.get(v.ray)
            if t is not None and v.index >= t.start:
                if not t.is_live(v.index):
                    return v
                m = v.index - t.step
                return t.attach if m == 0 else RayVertex(v.ray, m)
        raise UnknownVertex(v)

    def iterate(self, v, n: int):
        """``p^n(v)``."""
        for _ in range(n):
            w = self.parent(v)
            if w == v:
                break
            v = w
        return v

    def is_root(self, v) -> bool:
        return self.parent(v) == v

    def root_of(self, v):
        while True:
            w = self.parent(v)
            if w == v:
                return v
            v = w

    def ancestors(self, v) -> list:
        """``[v, p(v), p^2(v), ...]`` ending at the root."""
        out = [v]
        while (w := self.parent(out[-1])) != out[-1]:
            out.append(w)
        return out

    def roots(self) -> frozenset:
        """Explicit roots.  Dead tail vertices are roots too; see :attr:`has_tail_roots`."""
        return frozenset(v for v, p in self._parent.items() if v == p)

    @property
    def has_tail_roots(self) -> bool:
        return any(not t.all_live for t in self._tails.values())

    # -- children and descendants ---------------------------------------------

    def _kid_index(self):
        if self._kids is None:
            kids = defaultdict(list)
            for v, p in self._parent.items():
                if v != p:
                    kids[p].append(v)
            self._kids = kids
        return self._kids

    def children(self, v) -> frozenset:
        self._require(v)
        kids = set(self._kid_index().get(v, ()))
        for rid, t in self._tails.items():
            if isinstance(v, RayVertex):
                if v.ray != rid:
                    continue
                n = v.index + t.step
            elif v == t.attach:
                n = t.step
            else:
                continue
            if n >= t.start and t.is_live(n):
                kids.add(RayVertex(rid, n))
        return frozenset(kids)

    def k_children(self, v, k: int) -> frozenset:
        if k < 0:
            raise ValueError("k must be non-negative")
        level = {v}
        self._require(v)
        for _ in range(k):
            level = {c for u in level for c in self.children(u)}
        return frozenset(level)

    def degree(self, v) -> int:
        return len(self.children(v))

    def descendants(self, v, depth_cap: int) -> Descendants:
        if depth_cap < 0:
            raise ValueError("depth_cap must be non-negative")
        seen, level = {v}, {v}
        self._require(v)
        for _ in range(depth_cap):
            level = {c for u in level for c in self.children(u)} - seen
            if not level:
                break
            seen |= level
        return Descendants(frozenset(seen), self._has_tail_below(v))

    def _has_tail_below(self, v) -> bool:
        # Des(v) is infinite iff it meets a live tail vertex.
        if isinstance(v, RayVertex) and v not in self._parent:
            t = self._tails[v.ray]
            return t.is_live(v.index + t.step)
        for rid, t in self._tails.items():
            for n in range(t.start, t.start + t.step):
                if t.is_live(n) and v in self.ancestors(self.parent(RayVertex(rid, n))):
                    return True
        return False

    # -- leaves, forks, chains ------------------------------------------------

    def _tail_leaf_residues(self, t: Tail) -> bool:
        return any(t.is_live(c) and not t.is_live(c + t.step) for c in range(t.period))

    def leaves(self) -> frozenset:
        """Vertices outside the image of the parent function."""
        if any(self._tail_leaf_residues(t) for t in self._tails.values()):
            raise InfiniteResult("ray tails contain infinitely many leaves")
        return frozenset(
            v for v, p in self._parent.items() if v != p and not self.children(v)
        )

    def is_leafless(self) -> bool:
        if any(self._tail_leaf_residues(t) for t in self._tails.values()):
            return False
        return all(v == p or self.children(v) for v, p in self._parent.items())

    def is_forkless(self) -> bool:
        """Every non-root vertex has exactly one child."""
        for t in self._tails.values():
            if self._tail_leaf_residues(t):
                return False
        return all(v == p or len(self.children(v)) == 1 for v, p in self._parent.items())

    def _chain_set(self) -> frozenset:
        if self._chain is None:
            marked = set()
            for rid, t in self._tails.items():
                for n in range(t.start, t.start + t.step):
                    if t.is_live(n) and t.chain_is_infinite(n):
                        for a in self.ancestors(self.parent(RayVertex(rid, n))):
                            if a in marked:
                                break
                            marked.add(a)
            self._chain = frozenset(marked)
        return self._chain

    def has_infinite_chain_below(self, v) -> bool:
        """Whether an infinite sequence ``v = v0, v1, ...`` with ``p(v_{n+1}) = v_n`` exists."""
        self._require(v)
        if v in self._parent:
            return v in self._chain_set()
        t = self._tails[v.ray]
        return t.chain_is_infinite(v.index)

    # -- trees ----------------------------------------------------------------

    def tree_of(self, v) -> "TreeHandle":
        self._require(v)
        return TreeHandle(self.root_of(v), self)

    def trees(self) -> list:
        if self.has_tail_roots:
            raise InfiniteResult("dead tail vertices form infinitely many degenerate trees")
        return [TreeHandle(r, self) for r in sorted(self.roots(), key=vertex_key)]

    def tree_count(self):
        return math.inf if self.has_tail_roots else len(self.roots())

    # -- re-encodings ---------------------------------------------------------

    def unroll(self, ray: str, start: int) -> "Forest":
        """Same forest with the explicit prefix of ``ray`` extended up to ``start``."""
        t = self._tails[ray]
        if start <= t.start:
            return self
        parent = dict(self._parent)
        for n in range(t.start, start):
            v = RayVertex(ray, n)
            parent[v] = self.parent(v)
        tails = dict(self._tails)
        tails[ray] = Tail(t.attach, start, t.step, t.period, t.live)
        return Forest(parent, tails)

    def ensure_explicit(self, vertices: Iterable) -> "Forest":
        need = {}
        for v in vertices:
            self._require(v)
            if v not in self._parent:
                need[v.ray] = max(need.get(v.ray, 0), v.index + 1)
        f = self
        for ray, start in sorted(need.items()):
            f = f.unroll(ray, start)
        return f

    def with_parents(self, updates: Mapping) -> "Forest":
        """Replace parents of explicit vertices (call :meth:`ensure_explicit` first)."""
        for v in updates:
            if v not in self._parent:
                raise UnknownVertex(v)
        parent = dict(self._parent)
        parent.update(updates)
        return Forest(parent, self._tails)

    def relabel(self, core_map, ray_map) -> "Forest":
        def f(v):
            return RayVertex(ray_map(v.ray), v.index) if isinstance(v, RayVertex) else core_map(v)

        parent = {f(v): f(p) for v, p in self._parent.items()}
        tails = {
            ray_map(r): Tail(core_map(t.attach), t.start, t.step, t.period, t.live)
            for r, t in self._tails.items()
        }
        return Forest(parent, tails)

    # -- comparison -----------------------------------------------------------

    def same_vertex_set(self, other: "Forest") -> bool:
        return self._core == other._core and self._tails.keys() == other._tails.keys()

    def __eq__(self, other):
        if not isinstance(other, Forest):
            return NotImplemented
        if not self.same_vertex_set(other):
            return False
        return all(self.parent(v) == other.parent(v) for v in probe_vertices(self, other))

    def __hash__(self):
        return hash((self._core, frozenset(self._tails)))

    def __repr__(self):
        edges = ", ".join(f"{v}->{p}" for v, p in sorted(self._parent.items(),
                                                         key=lambda kv: vertex_key(kv[0])))
        rays = ", ".join(
            f"{r}@{t.attach}" + ("" if (t.start, t.step, t.period) == (1, 1, 1) and t.all_live
                                 else f"[start={t.start},step={t.step},period={t.period},"
                                      f"live={sorted(t.live)}]")
            for r, t in sorted(self._tails.items())
        )
        return f"Forest({edges}{'; rays: ' + rays if rays else ''})"


@dataclass(frozen=True)
class TreeHandle:
    """Connected component, identified by its root."""

    representative: Hashable
    forest: Forest = field(compare=False, repr=False)

    def __contains__(self, v) -> bool:
        return v in self.forest and self.forest.root_of(v) == self.representative


def probe_vertices(*forests: Forest) -> Iterator:
    """Vertices on which forests sharing a vertex set must be compared.

    Beyond the probed ray indices every tail behaves periodically, so any
    pointwise relation between parent functions (or child sets) that holds on
    the probe holds everywhere.
    """
    first = forests[0]
    yield from sorted(first.core, key=vertex_key)
    for rid in sorted(first.ray_ids):
        ts = [f._tails[rid] for f in forests]
        top = max(t.start for t in ts) + 1
        span = _lcm(*(t.step for t in ts), *(t.period for t in ts))
        for n in range(1, top + 2 * span):
            yield RayVertex(rid, n)


def validate_forest(parent: Mapping, rays=()) -> Forest:
    """Build a forest from a core parent map and ``(ray_id, attach)`` pairs.

    ``rays`` may be a mapping ``{ray_id: attach}`` or an iterable of pairs or
    of ``{"id": ..., "attach": ...}`` dicts.
    """
    if isinstance(rays, Mapping):
        pairs = list(rays.items())
    else:
        pairs = [(r["id"], r["attach"]) if isinstance(r, Mapping) else tuple(r) for r in rays]
    tails = {}
    for rid, attach in pairs:
        if rid in tails:
            raise ValidationError(f"duplicate ray id {rid!r}")
        if attach not in parent:
            raise BadAttach(rid, attach)
        tails[rid] = Tail(attach)
    return Forest(parent, tails)


def direct_sum(f1: Forest, f2: Forest, relabel: bool = True) -> Forest:
    clash = (f1.core & f2.core) | (f1.ray_ids & f2.ray_ids)
    if clash:
        if not relabel:
            raise LabelClash(clash)
        f1 = f1.relabel(lambda v: f"0:{v}", lambda r: f"0:{r}")
        f2 = f2.relabel(lambda v: f"1:{v}", lambda r: f"1:{r}")
    parent = {**f1._parent, **f2._parent}
    return Forest(parent, {**f1._tails, **f2._tails})


def canonical_form(forest: Forest) -> str:
    """Label-independent encoding of a finite forest (sorted-multiset hashing)."""
    if not forest.is_finite:
        raise RaysUnsupported("canonical forms are defined for finite forests only")
    # children before parents: order by depth, deepest first
    depth = {}
    for v in forest.explicit:
        chain = forest.ancestors(v)
        depth[v] = len(chain) - 1
    code = {}
    for v in sorted(depth, key=lambda u: -depth[u]):
        code[v] = "(" + "".join(sorted(code[c] for c in forest.children(v))) + ")"
    return "[" + "".join(sorted(code[r] for r in forest.roots())) + "]"


def is_isomorphic(f1: Forest, f2: Forest) -> bool:
    return canonical_form(f1) == canonical_form(f2)

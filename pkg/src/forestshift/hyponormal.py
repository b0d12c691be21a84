"""Hyponormality of weighted shifts on forests.

The self-commutator ``S*S - SS*`` splits into the diagonal of
``||S e_v||**2`` minus one rank-one block per sibling set.  A block
``D - a a*`` is positive semidefinite iff every ``a_c != 0`` has ``D_c > 0``
and ``sum |a_c|**2 / D_c <= 1``; :func:`is_hyponormal` applies this per
parent, and :func:`oracle_verdict` cross-checks it by eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import NotHermitian, NotSquare, SearchFailed, SupportForkless, WindowEmpty
from .forest import Forest, RayVertex, Tail, vertex_key
from .order import leafless_support
from .shift import (
    RayProfile,
    TruncationWindow,
    WeightSystem,
    abs_sq,
    depth_window,
    local_norm_sq,
    materialize,
    power_weights,
    probe_parents,
)

DEFAULT_TOL = 1e-9
DEFAULT_PARAMS = (10, 1, 10)


@dataclass(frozen=True)
class HypoWitness:
    parent: object
    lhs: object
    kind: str  # sum_exceeds_one | zero_norm_child | negative_eigenvalue


@dataclass(frozen=True)
class HypoVerdict:
    hyponormal: bool
    witnesses: tuple = ()
    method: str = "local"
    exact: bool = False


@dataclass(frozen=True)
class Classification:
    support_forkless: bool
    fork_witness: object
    support: Forest = field(repr=False)


@dataclass(frozen=True)
class CounterexampleReport:
    forest: Forest
    weights: WeightSystem
    fork_vertex: object
    fork_children: tuple
    params: tuple
    hypo_check: HypoVerdict
    square_check: HypoVerdict
    square_min_eigenvalue: float
    ratios: dict


def _ratio(num, den, exact):
    if exact:
        return Fraction(num) / Fraction(den)
    return num / den


def parent_sum(forest: Forest, lam: WeightSystem, u, exact: bool | None = None):
    """``sum |lam_c|**2 / ||S e_c||**2`` over nonzero-weight children ``c`` of ``u``.

    Returns ``math.inf`` when some such child has ``||S e_c|| = 0``.
    """
    if exact is None:
        exact = lam.is_exact
    total = Fraction(0) if exact else 0.0
    for c in sorted(forest.children(u), key=vertex_key):
        w = lam(c)
        if w == 0:
            continue
        d = local_norm_sq(forest, lam, c)
        if d == 0:
            return math.inf
        total += _ratio(abs_sq(w), d, exact)
    return total


def is_hyponormal(forest: Forest, lam: WeightSystem, tol: float = DEFAULT_TOL) -> HypoVerdict:
    exact = lam.is_exact
    bound = 1 if exact else 1 + tol
    witnesses = []
    seen = set()
    for u in probe_parents(forest, lam):
        if u in seen:
            continue
        seen.add(u)
        s = parent_sum(forest, lam, u, exact)
        if s == math.inf:
            witnesses.append(HypoWitness(u, math.inf, "zero_norm_child"))
        elif s > bound:
            witnesses.append(HypoWitness(u, s, "sum_exceeds_one"))
    return HypoVerdict(not witnesses, tuple(witnesses), "local", exact)


def commutator(forest: Forest, lam: WeightSystem, window: TruncationWindow) -> np.ndarray:
    """``S*S - SS*`` compressed to a parent-closed window."""
    if len(window) == 0:
        raise WindowEmpty("window has no vertices")
    m = materialize(forest, lam, window)
    diag = np.array([complex(local_norm_sq(forest, lam, v)) for v in window.vertices])
    if not np.iscomplexobj(m):
        diag = diag.real
    return np.diag(diag) - m @ m.conj().T


def safe_vertices(forest: Forest, window: TruncationWindow) -> list:
    """Window vertices whose whole sibling set lies in the window."""
    inside = set(window.vertices)
    out = []
    for v in window.vertices:
        if v in window.ragged:
            continue
        if forest.is_root(v) or forest.children(forest.parent(v)) <= inside:
            out.append(v)
    return out


def psd_oracle(matrix, tol: float = DEFAULT_TOL) -> bool:
    return min_eigenvalue(matrix, tol) >= -tol * _scale(matrix)


def _scale(a) -> float:
    return max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0


def min_eigenvalue(matrix, tol: float = DEFAULT_TOL) -> float:
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")
    if a.size == 0:
        return 0.0
    if np.max(np.abs(a - a.conj().T)) > tol * _scale(a):
        raise NotHermitian("matrix is not self-adjoint within tolerance")
    return float(np.linalg.eigvalsh(a)[0])


def oracle_verdict(forest: Forest, lam: WeightSystem, window_depth: int = 8,
                   tol: float = DEFAULT_TOL) -> HypoVerdict:
    """Eigenvalue test of the commutator on the safely-interior part of a depth window."""
    window = depth_window(forest, lam, window_depth)
    full = commutator(forest, lam, window)
    idx = window.index()
    safe = safe_vertices(forest, window)
    sel = [idx[v] for v in safe]
    block = full[np.ix_(sel, sel)]
    ok = psd_oracle(block, tol)
    witnesses = []
    if not ok:
        scale = _scale(block)
        groups: dict = {}
        for v in safe:
            key = v if forest.is_root(v) else forest.parent(v)
            groups.setdefault(key, []).append(idx[v])
        for u, rows in groups.items():
            ev = float(np.linalg.eigvalsh(full[np.ix_(rows, rows)])[0])
            if ev < -tol * scale:
                witnesses.append(HypoWitness(u, ev, "negative_eigenvalue"))
    return HypoVerdict(ok, tuple(witnesses), "oracle", False)


def local_vs_oracle_check(forest: Forest, lam: WeightSystem, window_depth: int = 8,
                          tol: float = DEFAULT_TOL) -> bool:
    local = is_hyponormal(forest, lam, tol)
    oracle = oracle_verdict(forest, lam, max(window_depth, 3), tol)
    return local.hyponormal == oracle.hyponormal


def is_power_hyponormal(forest: Forest, lam: WeightSystem, max_power: int,
                        tol: float = DEFAULT_TOL) -> list:
    if max_power < 1:
        raise ValueError("max_power must be at least 1")
    return [is_hyponormal(*power_weights(forest, lam, k), tol=tol)
            for k in range(1, max_power + 1)]


def classify(forest: Forest) -> Classification:
    support = leafless_support(forest)
    for v in support.explicit:
        if not support.is_root(v) and support.degree(v) >= 2:
            return Classification(False, v, support)
    return Classification(True, None, support)


# -- counterexample synthesis -------------------------------------------------

def _walk_chain(forest: Forest, start) -> tuple[list, object]:
    """Follow smallest children from ``start`` until the first implicit tail vertex."""
    chain = [start]
    explicit = set(forest.explicit)
    while chain[-1] in explicit:
        kids = sorted(forest.children(chain[-1]), key=vertex_key)
        chain.append(kids[0])
    return chain[:-1], chain[-1]


def _witness_forest(support: Forest, u):
    v1, w1 = sorted(support.children(u), key=vertex_key)[:2]
    # make both chain entries explicit so the fork children and their weights sit in the prefix
    f = support
    need = {}
    for c in (v1, w1):
        _, entry = _walk_chain(f, c)
        need[entry.ray] = max(need.get(entry.ray, 0), entry.index + 1)
    for rid, s in need.items():
        f = f.unroll(rid, s)
    chains = {c: _walk_chain(f, c) for c in (v1, w1)}
    ancestors = f.ancestors(u)
    keep = set(ancestors)
    for c in (v1, w1):
        keep.update(chains[c][0])
    parent = {v: (f.parent(v) if v in keep else v) for v in f.explicit}
    residues: dict = {}
    for c in (v1, w1):
        entry = chains[c][1]
        residues.setdefault(entry.ray, {})[entry.index % f.tails[entry.ray].step] = c
    tails = {}
    for rid, t in f.tails.items():
        if rid in residues:
            tails[rid] = Tail(t.attach, t.start, t.step, t.step, frozenset(residues[rid]))
        else:
            tails[rid] = Tail(t.attach, t.start, 1, 1, frozenset())
    w = Forest(parent, tails)
    return w, ancestors, (v1, w1), chains, residues


def _family_weights(w: Forest, ancestors, forks, chains, residues, t, a, b) -> WeightSystem:
    v1, w1 = forks
    values = {v: t for v in ancestors if not w.is_root(v)}
    values[v1], values[w1] = a, b
    for c, tail_w in ((v1, 2 * a), (w1, 2 * b)):
        for x in chains[c][0][1:]:
            values[x] = tail_w
    tail_weight = {v1: 2 * a, w1: 2 * b}

    core = {v: values.get(v, 0) for v in w.core}
    rays = {}
    for rid, tl in w.tails.items():
        prefix = tuple(values.get(RayVertex(rid, n), 0) for n in range(1, tl.start))
        res = residues.get(rid, {})
        cycle = tuple(
            tail_weight[res[n % tl.step]] if n % tl.step in res else 0
            for n in range(tl.start, tl.start + tl.period)
        )
        rays[rid] = RayProfile(prefix, cycle)
    return WeightSystem(core, rays)


def _square_min_eigenvalue(w: Forest, lam: WeightSystem, depth: int, tol: float) -> float:
    f2, lam2 = power_weights(w, lam, 2)
    window = depth_window(f2, lam2, depth)
    full = commutator(f2, lam2, window)
    idx = window.index()
    sel = [idx[v] for v in safe_vertices(f2, window)]
    return min_eigenvalue(full[np.ix_(sel, sel)], tol)


def construct_counterexample(forest: Forest, params=DEFAULT_PARAMS, window_depth: int = 8,
                             tol: float = DEFAULT_TOL, search: bool = True) -> CounterexampleReport:
    """Hyponormal shift whose square is not hyponormal, on a thinning of ``forest``.

    The fork vertex ``u`` of the leafless support keeps its ancestor chain and
    two infinite child chains; every other vertex becomes a root.  Weights:
    ``t`` on ``u`` and its non-root ancestors, ``a`` and ``b`` on the two fork
    children, then ``2a`` and ``2b`` along their chains.
    """
    cls = classify(forest)
    if cls.support_forkless:
        raise SupportForkless("leafless support is forkless; every hyponormal shift is power hyponormal")
    u = cls.fork_witness
    w, ancestors, forks, chains, residues = _witness_forest(cls.support, u)

    def attempt(t, a, b):
        lam = _family_weights(w, ancestors, forks, chains, residues, t, a, b)
        hypo = is_hyponormal(w, lam, tol)
        sq = is_hyponormal(*power_weights(w, lam, 2), tol=tol)
        if not (hypo.hyponormal and not sq.hyponormal):
            return None
        if not oracle_verdict(w, lam, window_depth, tol).hyponormal:
            return None
        ev = _square_min_eigenvalue(w, lam, window_depth, tol)
        if ev >= -tol:
            return None
        parent_u = w.parent(u)
        f2, lam2 = power_weights(w, lam, 2)
        ratios = {
            "fork_parent": parent_sum(w, lam, parent_u),
            "fork": parent_sum(w, lam, u),
            "square_fork_parent": parent_sum(f2, lam2, parent_u),
        }
        return CounterexampleReport(w, lam, u, forks, (t, a, b), hypo, sq, ev, ratios)

    tried = [tuple(params)]
    rep = attempt(*params)
    if rep is not None:
        return rep
    if search:
        grid = [2 ** i for i in range(-3, 5)]
        for t, a, b in product(grid, repeat=3):
            tried.append((t, a, b))
            rep = attempt(Fraction(t), Fraction(a), Fraction(b))
            if rep is not None:
                return rep
    raise SearchFailed("no parameters in the family produced a counterexample", tried)

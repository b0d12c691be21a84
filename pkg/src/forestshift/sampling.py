"""Random forests and weight systems for property tests and the theorem harness."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .forest import Forest, RayVertex, Tail, vertex_key
from .order import leafless_support
from .shift import RayProfile, WeightSystem

_STEPS = (Fraction(1), Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(2))


def random_finite_forest(rng: random.Random, n: int, root_prob: float = 0.25) -> Forest:
    """``n`` vertices; vertex ``i`` is a root or picks a parent among ``0..i-1``."""
    labels = [f"v{i}" for i in range(n)]
    rng.shuffle(labels)
    parent = {}
    for i, lab in enumerate(labels):
        if i == 0 or rng.random() < root_prob:
            parent[lab] = lab
        else:
            parent[lab] = labels[rng.randrange(i)]
    return Forest(parent)


def with_nonroots(rng: random.Random, n_nonroots: int, n_roots: int) -> Forest:
    """Finite forest with exactly the given numbers of roots and non-roots."""
    labels = [f"v{i}" for i in range(n_roots + n_nonroots)]
    rng.shuffle(labels)
    parent = {lab: lab for lab in labels[:n_roots]}
    for i in range(n_roots, len(labels)):
        parent[labels[i]] = labels[rng.randrange(i)]
    return Forest(parent)


def random_ray_forest(rng: random.Random, n: int, n_rays: int, root_prob: float = 0.25) -> Forest:
    base = random_finite_forest(rng, n, root_prob)
    core = sorted(base.core, key=vertex_key)
    tails = {f"r{i}": Tail(rng.choice(core)) for i in range(n_rays)}
    return Forest({v: base.parent(v) for v in core}, tails)


def random_scalar(rng: random.Random, exact: bool = True, complex_ok: bool = False):
    if exact:
        return Fraction(rng.randint(1, 12), rng.randint(1, 4))
    x = rng.uniform(0.1, 3.0)
    if complex_ok and rng.random() < 0.5:
        return complex(x * math.cos(th := rng.uniform(0, 2 * math.pi)), x * math.sin(th))
    return x


def random_weights(rng: random.Random, forest: Forest, exact: bool = True,
                   zero_prob: float = 0.15, complex_ok: bool = False) -> WeightSystem:
    """Arbitrary weights with zeros on roots (and occasionally elsewhere)."""
    def draw(v):
        if forest.is_root(v) or rng.random() < zero_prob:
            return 0
        return random_scalar(rng, exact, complex_ok)

    core = {v: draw(v) for v in forest.core}
    rays = {}
    for rid, t in forest.tails.items():
        prefix = tuple(draw(RayVertex(rid, n)) for n in range(1, t.start + rng.randint(0, 3)))
        cycle_len = math.lcm(t.period, t.step)
        base = len(prefix) + 1
        cycle = tuple(draw(RayVertex(rid, base + i)) for i in range(cycle_len))
        rays[rid] = RayProfile(prefix, cycle)
    return WeightSystem(core, rays)


# -- forests with controlled leafless support ---------------------------------

class _Builder:
    def __init__(self, rng):
        self.rng = rng
        self.parent = {}
        self.tails = {}
        self.count = 0

    def new(self, parent=None):
        lab = f"n{self.count}"
        self.count += 1
        self.parent[lab] = lab if parent is None else parent
        return lab

    def ray(self, attach):
        rid = f"r{len(self.tails)}"
        self.tails[rid] = Tail(attach)
        return rid

    def arm(self, top, max_len=3):
        """Core chain below ``top`` ending in a ray."""
        v = top
        for _ in range(self.rng.randint(0, max_len)):
            v = self.new(v)
        self.ray(v)
        return v

    def bush(self, top, size):
        verts = [top]
        for _ in range(size):
            verts.append(self.new(self.rng.choice(verts)))

    def forest(self):
        return Forest(self.parent, self.tails)


def forkless_support_forest(rng: random.Random, max_roots: int = 3, max_arms: int = 3,
                            junk: int = 4) -> Forest:
    """Roots carrying several arms (chains ending in rays) plus finite bushes anywhere."""
    b = _Builder(rng)
    for _ in range(rng.randint(1, max_roots)):
        root = b.new()
        for _ in range(rng.randint(0, max_arms)):
            b.arm(root)
    for _ in range(rng.randint(0, junk)):
        b.bush(rng.choice(sorted(b.parent)), rng.randint(1, 3))
    return b.forest()


def forked_forest(rng: random.Random, max_roots: int = 2, junk: int = 3) -> Forest:
    """Like :func:`forkless_support_forest` but with a non-root vertex carrying two arms."""
    b = _Builder(rng)
    roots = [b.new() for _ in range(rng.randint(1, max_roots))]
    v = rng.choice(roots)
    for _ in range(rng.randint(1, 3)):
        v = b.new(v)
    for _ in range(rng.randint(2, 3)):
        b.arm(v)
    for r in roots:
        for _ in range(rng.randint(0, 2)):
            b.arm(r)
    for _ in range(rng.randint(0, junk)):
        b.bush(rng.choice(sorted(b.parent)), rng.randint(1, 3))
    return b.forest()


def degenerate_forest(rng: random.Random, max_n: int = 6) -> Forest:
    labels = [f"d{i}" for i in range(rng.randint(1, max_n))]
    return Forest({v: v for v in labels})


def _arms(support: Forest):
    """For every explicit root, its infinite chains as (explicit vertices, ray id) pairs."""
    explicit = set(support.explicit)
    out = {}
    for root in sorted(support.roots(), key=vertex_key):
        arms = []
        for c in sorted(support.children(root), key=vertex_key):
            chain = [c]
            while chain[-1] in explicit:
                (nxt,) = support.children(chain[-1])
                chain.append(nxt)
            tail_vertex = chain.pop()
            arms.append((chain, tail_vertex.ray))
        out[root] = arms
    return out


def _nondecreasing(rng, length, exact=True):
    x = random_scalar(rng, exact)
    seq = []
    for _ in range(length):
        seq.append(x)
        x = x * rng.choice(_STEPS) if exact else x * float(rng.choice(_STEPS))
    return seq


def random_hyponormal_weights(rng: random.Random, forest: Forest, proper: bool = False,
                              exact: bool = True) -> WeightSystem:
    """Hyponormal weights supported on the leafless support of a forest whose
    leafless support is forkless (and whose rays are plain, i.e. all live, start 1).

    Along every chain the weights are nondecreasing with a constant ray tail;
    the weights of first vertices are scaled down so that each root's
    condition holds.  In general mode some chains start with zeros.
    """
    support = leafless_support(forest)
    core = {v: 0 for v in forest.core}
    rays = {rid: RayProfile((), (0,)) for rid in forest.ray_ids}
    for root, arms in _arms(support).items():
        live = [a for a in arms if proper or rng.random() < 0.9]
        f = Fraction(1, math.isqrt(max(len(live) - 1, 0)) + 1) if exact else 1 / math.ceil(math.sqrt(max(len(live), 1)))
        for chain, rid in arms:
            n_prefix = rng.randint(1, 3)
            seq = _nondecreasing(rng, len(chain) + n_prefix + 1, exact)
            if (chain, rid) in live:
                seq[0] = min(seq[0], f * seq[1] * rng.choice((1, 1, Fraction(1, 2)) if exact else (1, 1, 0.5)))
            else:
                seq[0] = 0 * seq[0]
            if not proper and rng.random() < 0.3:
                cut = rng.randint(1, len(seq) - 1)
                seq[:cut] = [0] * cut
            for v, w in zip(chain, seq):
                core[v] = w
            rest = seq[len(chain):]
            rays[rid] = RayProfile(tuple(rest[:-1]), (rest[-1],))
    return WeightSystem(core, rays)

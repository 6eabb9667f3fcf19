"""Displacement witnesses: back-and-forth trees, inequalities, free actions.

Three independent certificate families live here.

Back-and-forth trees: leveled families of finite partial automorphisms of a
relational limit structure (pure set, dense order, random graph) whose
branches assemble into automorphisms moving every normalized nonnegative
weight function by at least 1/2 in the l1 norm.  The tree can be
materialized and its defining conditions checked exhaustively; the greedy
branch walk is lazy and certifies its own displacement bound with exact
rational arithmetic.

Norm inequalities: the marginal contraction for diagonal actions on tuple
spaces and the l1/l2 transfer that converts displacement bounds into
Kazhdan-type estimates, both checked on seeded random instances.

Free actions: five embeddings of the free group on two generators, one per
built-in class, acting freely on the moving part of the respective limit
structure.  Freeness and invariance are checked exactly on word balls; the
random Cayley graph additionally reports an extension-property satisfaction
rate, which is a finite stand-in for an almost-sure asymptotic statement.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .errors import (
    FreenessViolation,
    InvariantViolation,
    MalformedStructure,
    NoAlgebraicityRequired,
    SizeLimitExceeded,
    SupportOutsideEnumeration,
    TruncationTooSmall,
    UndecidedComparison,
)
from .limits import get_limits
from .words import (
    EMPTY,
    ball,
    inv,
    magnus_compare,
    mult,
    pair_coin,
    random_word,
    word_key,
)

__all__ = [
    "Distribution",
    "random_distribution",
    "partial_displacement",
    "l1_displacement",
    "marginal_check",
    "l1_l2_transfer",
    "KazhdanTree",
    "build_tree",
    "greedy_witness",
    "f2_embedding",
    "freeness_check",
    "order_axioms_check",
    "cayley_edge_invariance",
    "cayley_extension_check",
]


# ---------------------------------------------------------------------------
# distributions and displacement


class Distribution:
    """Finitely supported nonnegative weights of total mass one, exact."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        self.weights = {}
        for point, value in dict(weights).items():
            value = Fraction(value)
            if value < 0:
                raise MalformedStructure(f"negative weight at {point!r}")
            if value:
                self.weights[point] = value
        if sum(self.weights.values()) != 1:
            raise MalformedStructure("weights must sum to exactly 1")

    def __getitem__(self, point):
        return self.weights.get(point, Fraction(0))

    def support(self):
        return set(self.weights)

    def items(self):
        return sorted(self.weights.items())

    def __repr__(self):
        inner = ", ".join(f"{p!r}: {v}" for p, v in self.items())
        return f"Distribution({{{inner}}})"


def random_distribution(rng, points, max_support=None):
    """Random element of the normalized nonnegative weights on ``points``."""
    points = list(points)
    size = rng.randint(1, min(len(points), max_support or len(points)))
    support = rng.sample(points, size)
    raw = [rng.randint(1, 16) for _ in support]
    total = sum(raw)
    return Distribution({p: Fraction(k, total) for p, k in zip(support, raw)})


def partial_displacement(f, mapping):
    """Sum of |f(x) - f(gx)| over the domain of a partial map.

    Every total extension of the map displaces ``f`` by at least this much,
    since the missing terms are nonnegative.
    """
    return sum((abs(f[x] - f[y]) for x, y in mapping.items()), Fraction(0))


def l1_displacement(f, perm):
    """l1 distance between f and its translate under a full permutation.

    ``f`` maps tuples to rationals; ``perm`` is a point permutation acting
    diagonally.  Points missing from ``perm`` are fixed.
    """
    inverse = {v: k for k, v in perm.items()}

    def pull(xs):
        return tuple(inverse.get(x, x) for x in xs)

    moved = {tuple(perm.get(x, x) for x in xs) for xs in f}
    total = Fraction(0)
    for xs in set(f) | moved:
        total += abs(f.get(pull(xs), Fraction(0)) - f.get(xs, Fraction(0)))
    return total


def _random_signed_function(rng, points, tuple_len, support_size):
    out = {}
    while len(out) < support_size:
        xs = tuple(rng.choice(points) for _ in range(tuple_len))
        num = rng.randint(-12, 12) or 1
        out[xs] = Fraction(num, rng.randint(1, 9))
    return out


def marginal_check(seed, n_points=6, tuple_len=3, support_size=5):
    """Marginals contract displacement: |g f~ - f~|_1 <= |g f - f|_1.

    ``f~`` integrates out the last coordinate.  Checked exactly on one
    seeded random instance; returns the two norms and the verdict.
    """
    rng = random.Random(seed)
    points = list(range(n_points))
    images = points[:]
    rng.shuffle(images)
    perm = dict(zip(points, images))
    f = {}
    while len(f) < support_size:
        f[tuple(rng.choice(points) for _ in range(tuple_len))] = rng.randint(1, 16)
    total = sum(f.values())
    f = {xs: Fraction(v, total) for xs, v in f.items()}
    marginal = {}
    for xs, v in f.items():
        head = xs[:-1]
        marginal[head] = marginal.get(head, Fraction(0)) + v
    lhs = l1_displacement(marginal, perm)
    rhs = l1_displacement(f, perm)
    return {"seed": seed, "lhs": lhs, "rhs": rhs, "ok": lhs <= rhs}


def l1_l2_transfer(seed, n_points=6, tuple_len=2, support_size=5):
    """Squared form of |g f~ - f~|_1 <= 2 |g f - f|_2 |f|_2 with f~ = f^2.

    Also checks the scalar inequality |a - b|^2 <= |a^2 - b^2| behind it on
    the absolute values occurring in the instance.
    """
    rng = random.Random(seed)
    points = list(range(n_points))
    images = points[:]
    rng.shuffle(images)
    perm = dict(zip(points, images))
    f = _random_signed_function(rng, points, tuple_len, support_size)
    squared = {xs: v * v for xs, v in f.items()}
    lhs = l1_displacement(squared, perm)
    inverse = {v: k for k, v in perm.items()}
    moved = {tuple(perm.get(x, x) for x in xs) for xs in f}
    diff_sq = Fraction(0)
    for xs in set(f) | moved:
        pulled = tuple(inverse.get(x, x) for x in xs)
        d = f.get(pulled, Fraction(0)) - f.get(xs, Fraction(0))
        diff_sq += d * d
    norm_sq = sum((v * v for v in f.values()), Fraction(0))
    ok = lhs * lhs <= 4 * diff_sq * norm_sq
    values = sorted(abs(v) for v in f.values())
    scalar_ok = all(
        (a - b) ** 2 <= abs(a * a - b * b)
        for a, b in itertools.combinations(values, 2))
    return {
        "seed": seed,
        "lhs": lhs,
        "diff_sq": diff_sq,
        "norm_sq": norm_sq,
        "ok": ok,
        "scalar_ok": scalar_ok,
    }


# ---------------------------------------------------------------------------
# ground structures for the back-and-forth trees

_SPREAD_BASE = 1 << 20


class _PureRealizer:
    """Countable set with no structure; extensions pick unused points."""

    class_id = "pure_set"

    def __init__(self, interleave=False):
        self.interleave = interleave
        self._next = _SPREAD_BASE

    def enumeration(self, m):
        return list(range(m))

    def enumeration_index(self, point):
        if isinstance(point, int) and 0 <= point < _SPREAD_BASE:
            return point + 1
        return None

    def _fresh(self, mapping, banned):
        if not self.interleave:
            while self._next in banned:
                self._next += 1
            point = self._next
            self._next += 1
            return point
        point = 0
        used = set(mapping) | set(mapping.values()) | banned
        while point in used:
            point += 1
        return point

    def forward_image(self, mapping, a, banned):
        return self._fresh(mapping, banned)

    def backward_preimage(self, mapping, a, banned):
        return self._fresh(mapping, banned)

    def is_partial_automorphism(self, mapping):
        return len(set(mapping.values())) == len(mapping)


class _LinearRealizer:
    """The rationals; enumeration on the integers, extensions in gaps."""

    class_id = "linear_order"

    def __init__(self, interleave=False):
        if interleave:
            raise MalformedStructure(
                "interleaved realization is only available for the pure set")
        self.interleave = False
        self._high = Fraction(_SPREAD_BASE)
        self._low = -Fraction(_SPREAD_BASE)

    def enumeration(self, m):
        return [Fraction(i) for i in range(m)]

    def enumeration_index(self, point):
        try:
            value = Fraction(point)
        except (TypeError, ValueError):
            return None
        if value.denominator == 1 and 0 <= value < _SPREAD_BASE:
            return int(value) + 1
        return None

    def _pick_in_gap(self, lo, hi, banned):
        if lo is None and hi is None:
            self._high += 1
            return self._high
        if hi is None:
            candidate = max([lo] + [b for b in banned if b > lo])
            step = Fraction(1)
            while candidate + step in banned:
                step += 1
            return candidate + step
        if lo is None:
            candidate = min([hi] + [b for b in banned if b < hi])
            step = Fraction(1)
            while candidate - step in banned:
                step += 1
            return candidate - step
        denom = 2
        while True:
            for j in range(1, denom, 2):
                candidate = lo + (hi - lo) * Fraction(j, denom)
                if candidate not in banned:
                    return candidate
            denom *= 2

    def forward_image(self, mapping, a, banned):
        below = [x for x in mapping if x < a]
        above = [x for x in mapping if x > a]
        lo = mapping[max(below)] if below else None
        hi = mapping[min(above)] if above else None
        return self._pick_in_gap(lo, hi, set(banned))

    def backward_preimage(self, mapping, a, banned):
        below = [x for x in mapping if mapping[x] < a]
        above = [x for x in mapping if mapping[x] > a]
        lo = max(below) if below else None
        hi = min(above) if above else None
        return self._pick_in_gap(lo, hi, set(banned))

    def is_partial_automorphism(self, mapping):
        if len(set(mapping.values())) != len(mapping):
            return False
        items = sorted(mapping.items())
        return all(items[i][1] < items[i + 1][1] for i in range(len(items) - 1))


class _RadoRealizer:
    """The random graph, materialized lazily around a bit-graph core.

    Enumeration points are the small nonnegative integers with the bit
    graph adjacency (i < j are adjacent iff bit i of j is set).  Witness
    points receive fresh ids above the spread base; each one declares its
    adjacency to the vertices it is prescribed to touch when it is created,
    and every pair not declared by then stays non-adjacent.  Since a fresh
    id has never been queried before, the declarations never contradict an
    earlier answer, so the union is a well-defined countable graph and the
    maps built here are partial automorphisms of it.
    """

    class_id = "graph"

    def __init__(self, interleave=False):
        if interleave:
            raise MalformedStructure(
                "interleaved realization is only available for the pure set")
        self.interleave = False
        self._next = _SPREAD_BASE
        self._edges = set()

    def adjacent(self, i, j):
        if i == j:
            return False
        lo, hi = (i, j) if i < j else (j, i)
        if hi < _SPREAD_BASE:
            return bool(hi >> lo & 1)
        return (lo, hi) in self._edges

    def enumeration(self, m):
        return list(range(m))

    def enumeration_index(self, point):
        if isinstance(point, int) and 0 <= point < _SPREAD_BASE:
            return point + 1
        return None

    def _witness(self, adjacency_to, banned):
        point = self._next
        while point in banned:
            point += 1
        self._next = point + 1
        for u in adjacency_to:
            self._edges.add((u, point) if u < point else (point, u))
        return point

    def forward_image(self, mapping, a, banned):
        adj = [mapping[x] for x in mapping if self.adjacent(a, x)]
        return self._witness(adj, banned)

    def backward_preimage(self, mapping, a, banned):
        adj = [x for x in mapping if self.adjacent(a, mapping[x])]
        return self._witness(adj, banned)

    def is_partial_automorphism(self, mapping):
        if len(set(mapping.values())) != len(mapping):
            return False
        for x, y in itertools.combinations(mapping, 2):
            if self.adjacent(x, y) != self.adjacent(mapping[x], mapping[y]):
                return False
        return True


_REALIZERS = {
    "pure_set": _PureRealizer,
    "linear_order": _LinearRealizer,
    "graph": _RadoRealizer,
}


def _realizer_for(class_id, interleave):
    maker = _REALIZERS.get(class_id)
    if maker is None:
        raise NoAlgebraicityRequired(
            f"displacement trees need a relational class with no "
            f"algebraicity; {class_id!r} does not qualify")
    return maker(interleave)


# ---------------------------------------------------------------------------
# the tree


class _TreeNode:
    __slots__ = ("mapping", "parent")

    def __init__(self, mapping, parent):
        self.mapping = mapping
        self.parent = parent

    def items(self):
        return frozenset(self.mapping.items())


class KazhdanTree:
    """Materialized levels of the back-and-forth family, plus the checker.

    Level 2n extends domains by the n-th enumeration point, level 2n+1
    extends ranges, each with 2^(n+1)-fold splitting whose new points are
    pairwise disjoint outside the parent.
    """

    def __init__(self, class_id, depth, enumeration, levels, interleave,
                 realizer):
        self.class_id = class_id
        self.depth = depth
        self.enumeration = enumeration
        self.levels = levels
        self.interleave = interleave
        self._realizer = realizer

    @property
    def node_count(self):
        return sum(len(level) for level in self.levels)

    def level_sizes(self):
        return [len(level) for level in self.levels]

    def verify(self):
        """Exhaustively check the six defining conditions and validity."""
        realizer = self._realizer
        enum = self.enumeration
        report = {}

        report["1_root"] = (
            len(self.levels[0]) == 1 and self.levels[0][0].mapping == {})

        valid = all(
            realizer.is_partial_automorphism(node.mapping)
            for level in self.levels for node in level)
        report["partial_automorphisms"] = valid

        unique = True
        for i in range(1, len(self.levels)):
            prev_sets = {}
            for node in self.levels[i - 1]:
                prev_sets.setdefault(len(node.mapping), set()).add(node.items())
            for node in self.levels[i]:
                if node.parent.items() > node.items():
                    unique = False
                items = sorted(node.mapping.items())
                found = 0
                for size, pool in prev_sets.items():
                    if size > len(items):
                        continue
                    for subset in itertools.combinations(items, size):
                        if frozenset(subset) in pool:
                            found += 1
                if found != 1:
                    unique = False
        report["2_unique_parent"] = unique

        covers = True
        bounded = True
        for i, level in enumerate(self.levels):
            number = i + 1
            n = number // 2
            head = set(enum[:n])
            for node in level:
                dom = set(node.mapping)
                ran = set(node.mapping.values())
                if number % 2 == 0 and not head <= dom:
                    covers = False
                if number % 2 == 1 and not head <= ran:
                    covers = False
                if not dom & ran <= head:
                    bounded = False
        report["3_covers_enumeration"] = covers
        report["4_intersection_bound"] = bounded

        report["5_range_splitting"] = self._splitting_ok(even=True)
        report["6_domain_splitting"] = self._splitting_ok(even=False)
        report["ok"] = all(report.values())
        report["node_count"] = self.node_count
        report["level_sizes"] = self.level_sizes()
        return report

    def _splitting_ok(self, even):
        enum = self.enumeration
        for i in range(1, len(self.levels)):
            number = i + 1
            if (number % 2 == 0) != even:
                continue
            n = number // 2
            a = enum[n - 1]
            children = {}
            for node in self.levels[i]:
                children.setdefault(id(node.parent), []).append(node)
            for parent in self.levels[i - 1]:
                kids = children.get(id(parent), [])
                mapping = parent.mapping
                ran = set(mapping.values())
                present = a in mapping if even else a in ran
                if present:
                    if len(kids) != 1 or kids[0].mapping != mapping:
                        return False
                    continue
                if len(kids) != 2 ** (n + 1):
                    return False
                core = ran if even else set(mapping)
                for kid in kids:
                    if not kid.items() >= parent.items():
                        return False
                for k1, k2 in itertools.combinations(kids, 2):
                    s1 = (set(k1.mapping.values()) if even
                          else set(k1.mapping))
                    s2 = (set(k2.mapping.values()) if even
                          else set(k2.mapping))
                    if s1 & s2 != core:
                        return False
        return True

    def to_json(self):
        return {
            "class": self.class_id,
            "depth": self.depth,
            "interleave": self.interleave,
            "node_count": self.node_count,
            "level_sizes": self.level_sizes(),
            "enumeration": [str(a) for a in self.enumeration],
        }


def build_tree(class_id, depth, interleave=False, limits=None):
    """Materialize levels 1..depth of the back-and-forth tree."""
    limits = limits or get_limits()
    if depth < 1:
        raise MalformedStructure("depth must be at least 1")
    realizer = _realizer_for(class_id, interleave)
    stages = max(depth // 2, 1)
    enum = realizer.enumeration(stages)
    enum_set = set(enum) if not interleave else set()
    levels = [[_TreeNode({}, None)]]
    total = 1
    for number in range(2, depth + 1):
        n = number // 2
        a = enum[n - 1]
        even = number % 2 == 0
        new_level = []
        for parent in levels[-1]:
            mapping = parent.mapping
            ran = set(mapping.values())
            present = a in mapping if even else a in ran
            if present:
                new_level.append(_TreeNode(dict(mapping), parent))
                continue
            banned = set(mapping) | ran | {a} | enum_set
            for _ in range(2 ** (n + 1)):
                if even:
                    c = realizer.forward_image(mapping, a, banned)
                    child = dict(mapping)
                    child[a] = c
                else:
                    c = realizer.backward_preimage(mapping, a, banned)
                    child = dict(mapping)
                    child[c] = a
                banned.add(c)
                new_level.append(_TreeNode(child, parent))
        total += len(new_level)
        if total > limits.tree_nodes:
            raise SizeLimitExceeded(
                f"tree would exceed {limits.tree_nodes} nodes at level "
                f"{number}; lower the depth")
        levels.append(new_level)
    return KazhdanTree(class_id, depth, enum, levels, interleave, realizer)


# ---------------------------------------------------------------------------
# the greedy walk


def greedy_witness(class_id, f, max_depth=None, interleave=False, limits=None):
    """Walk one branch and certify displacement at least 1/2 for ``f``.

    At each stage the walk either pins the image of the next enumeration
    point to a location where ``f`` is small, or, if the point already has
    an image, pins its preimage the same way.  The displacement of the
    resulting partial automorphism is a lower bound for the displacement of
    every automorphism extending it.
    """
    limits = limits or get_limits()
    realizer = _realizer_for(class_id, interleave)
    if not isinstance(f, Distribution):
        f = Distribution(f)

    stage_of = {}
    for point in f.support():
        index = realizer.enumeration_index(point)
        if index is None:
            raise SupportOutsideEnumeration(
                f"point {point!r} is not in the standard enumeration of "
                f"{class_id}")
        stage_of[point] = index
    stages = max(stage_of.values())
    if max_depth is not None and 2 * stages + 1 > max_depth:
        raise TruncationTooSmall(
            f"support reaches enumeration point {stages}, needing walk "
            f"depth {2 * stages + 1} > {max_depth}")
    if 2 ** (stages + 1) > limits.tree_nodes:
        raise SizeLimitExceeded(
            f"stage {stages} could branch {2 ** (stages + 1)} ways, beyond "
            f"the {limits.tree_nodes} node budget")

    enum = realizer.enumeration(stages)
    enum_set = set(enum) if not interleave else set()
    mapping = {}
    ran = set()
    certificates = []
    certified_points = set()

    def certify(side, n, point, value, bound):
        if point in certified_points:
            raise InvariantViolation(
                f"point {point!r} certified twice; bound accounting broken")
        certified_points.add(point)
        certificates.append({
            "stage": n,
            "side": side,
            "point": point,
            "value": value,
            "bound": bound,
        })

    for n in range(1, stages + 1):
        a = enum[n - 1]
        bound = Fraction(1, 2 ** (n + 1))
        even_certified = False
        if a not in mapping:
            banned = set(mapping) | ran | {a} | enum_set
            for _ in range(2 ** (n + 1)):
                c = realizer.forward_image(mapping, a, banned)
                if f[c] <= bound:
                    break
                banned.add(c)
            else:
                raise InvariantViolation(
                    "no small image among the branch candidates; "
                    "mass accounting broken")
            mapping[a] = c
            ran.add(c)
            certify("image", n, a, f[c], bound)
            even_certified = True
        if even_certified:
            if a not in ran:
                banned = set(mapping) | ran | {a} | enum_set
                d = realizer.backward_preimage(mapping, a, banned)
                mapping[d] = a
                ran.add(a)
        else:
            if a in ran:
                raise InvariantViolation(
                    f"{a!r} in both domain and range before its stage")
            banned = set(mapping) | ran | {a} | enum_set
            for _ in range(2 ** (n + 1)):
                d = realizer.backward_preimage(mapping, a, banned)
                if f[d] <= bound:
                    break
                banned.add(d)
            else:
                raise InvariantViolation(
                    "no small preimage among the branch candidates; "
                    "mass accounting broken")
            mapping[d] = a
            ran.add(a)
            certify("preimage", n, d, f[d], bound)

    displacement = partial_displacement(f, mapping)
    required = 1 - sum(
        (Fraction(1, 2 ** (n + 1)) for n in range(1, stages + 1)),
        Fraction(0))
    if displacement < required:
        raise InvariantViolation(
            f"certified displacement {displacement} below the guaranteed "
            f"bound {required}")
    return {
        "class": class_id,
        "interleave": interleave,
        "stages": stages,
        "support_size": len(f.support()),
        "domain_size": len(mapping),
        "displacement": displacement,
        "required": required,
        "ok": displacement >= Fraction(1, 2),
        "certificates": certificates,
    }


# ---------------------------------------------------------------------------
# free actions of the rank-two free group


class PureSetF2Action:
    """Left multiplication on the group itself, acting on reduced words."""

    class_id = "pure_set"

    def act(self, w, point):
        return mult(w, point)

    def sample_points(self, rng, count):
        return [random_word(rng, 3) for _ in range(count)]


class LinearOrderF2Action(PureSetF2Action):
    """Left multiplication, order-preserving for the series ordering.

    The ordering compares the first differing homogeneous component of the
    series expansion, is invariant on both sides, and is dense without
    endpoints, so the ordered orbit is a copy of the rationals.
    """

    class_id = "linear_order"

    def compare(self, u, v, max_degree=10):
        return magnus_compare(u, v, max_degree)


class VectorSpaceF2Action:
    """Permutation of a basis labeled by reduced words, extended linearly.

    Vectors are frozensets of (basis word, coefficient) pairs; the zero
    vector is the empty frozenset and is excluded from freeness checks.
    """

    def __init__(self, q):
        if q not in (2, 3):
            raise MalformedStructure("only q = 2 and q = 3 are built in")
        self.q = q
        self.class_id = "vector_space" if q == 2 else "vector_space_q3"

    def vector(self, items):
        out = {}
        for word, coeff in dict(items).items():
            coeff %= self.q
            if coeff:
                out[word] = coeff
        return frozenset(out.items())

    def add(self, u, v):
        out = dict(u)
        for word, coeff in v:
            out[word] = out.get(word, 0) + coeff
        return self.vector(out)

    def act(self, w, point):
        return frozenset((mult(w, b), c) for b, c in point)

    def sample_points(self, rng, count, max_support=3):
        pool = [x for x in ball(2)]
        out = []
        while len(out) < count:
            size = rng.randint(1, max_support)
            words = rng.sample(pool, size)
            vec = self.vector({b: rng.randint(1, self.q - 1) for b in words})
            if vec:
                out.append(vec)
        return out


class ClopenF2Action:
    """Shift action on the Cantor space of subsets of the group.

    A clopen set is stored as (support, masks): a sorted tuple of reduced
    words and the set of restrictions (as bitmasks over the support) that
    belong to the set.  The support is minimal: no coordinate can be
    dropped.  The empty set and the full space have empty support and are
    the excluded fixed points.
    """

    class_id = "boolean_algebra"

    def clopen(self, support, masks):
        support = sorted(set(support), key=word_key)
        masks = set(masks)
        for mask in masks:
            if not 0 <= mask < 1 << len(support):
                raise MalformedStructure("mask outside the support cube")
        while True:
            for i in range(len(support)):
                if masks == {m ^ (1 << i) for m in masks}:
                    low = (1 << i) - 1
                    masks = {(m >> (i + 1)) << i | (m & low) for m in masks}
                    support = support[:i] + support[i + 1:]
                    break
            else:
                break
        return (tuple(support), frozenset(masks))

    def is_trivial(self, point):
        return not point[0]

    def act(self, w, point):
        support, masks = point
        moved = [mult(w, h) for h in support]
        order = sorted(range(len(moved)), key=lambda i: word_key(moved[i]))
        new_support = tuple(moved[i] for i in order)
        new_masks = set()
        for mask in masks:
            out = 0
            for pos, i in enumerate(order):
                if mask >> i & 1:
                    out |= 1 << pos
            new_masks.add(out)
        return (new_support, frozenset(new_masks))

    def sample_points(self, rng, count, max_support=3):
        pool = [x for x in ball(2)]
        out = []
        while len(out) < count:
            size = rng.randint(1, max_support)
            support = rng.sample(pool, size)
            full = 1 << size
            masks = {m for m in range(full) if rng.random() < 0.5}
            if not masks or len(masks) == full:
                continue
            point = self.clopen(support, masks)
            if not self.is_trivial(point):
                out.append(point)
        return out


class RadoF2Action:
    """Left multiplication on a random right Cayley graph of the group.

    The symmetric connection set is sampled by a deterministic fair coin on
    inverse pairs, so the graph is reproducible from the seed.  Left
    translations preserve x^-1 y exactly, hence act by graph isomorphisms.
    """

    class_id = "graph"

    def __init__(self, seed=0):
        self.seed = seed

    def adjacent(self, x, y):
        if x == y:
            return False
        return pair_coin(self.seed, mult(inv(x), y))

    def act(self, w, point):
        return mult(w, point)

    def sample_points(self, rng, count):
        return [random_word(rng, 3) for _ in range(count)]


def f2_embedding(class_id, seed=0):
    """The built-in free action for one of the five classes."""
    if class_id == "pure_set":
        return PureSetF2Action()
    if class_id == "linear_order":
        return LinearOrderF2Action()
    if class_id == "vector_space":
        return VectorSpaceF2Action(2)
    if class_id == "vector_space_q3":
        return VectorSpaceF2Action(3)
    if class_id == "boolean_algebra":
        return ClopenF2Action()
    if class_id == "graph":
        return RadoF2Action(seed)
    raise MalformedStructure(f"no free action registered for {class_id!r}")


def freeness_check(action, word_len=8, seed=0, points=None):
    """Every nonidentity word of length <= word_len moves every test point.

    ``action`` is a class id or an action object.  Raises on the first
    fixed point found; otherwise reports what was checked.
    """
    if isinstance(action, str):
        action = f2_embedding(action, seed=seed)
    rng = random.Random(seed)
    if points is None:
        if isinstance(action, (VectorSpaceF2Action, ClopenF2Action)):
            points = action.sample_points(rng, 30)
        else:
            points = list(ball(2))
    words = [w for w in ball(word_len) if w]
    for w in words:
        for point in points:
            if action.act(w, point) == point:
                raise FreenessViolation(
                    f"word {w!r} fixes point {point!r} in "
                    f"{action.class_id}")
    return {
        "class": action.class_id,
        "word_len": word_len,
        "words_checked": len(words),
        "points_checked": len(points),
        "ok": True,
    }


def order_axioms_check(word_len=6, max_degree=10, trials=10000, seed=0):
    """Totality, antisymmetry, transitivity, bi-invariance, and density.

    Samples word triples and counts failures; a correct order returns zero
    failures and zero undecided comparisons.  Density witnesses use the
    conjugation trick: some conjugate of a positive word sits strictly
    between the identity and the word.
    """
    rng = random.Random(seed)
    failures = 0
    undecided = 0
    density_checked = 0
    for _ in range(trials):
        u = random_word(rng, word_len)
        v = random_word(rng, word_len)
        w = random_word(rng, word_len)
        try:
            uv = magnus_compare(u, v, max_degree)
            vu = magnus_compare(v, u, max_degree)
            if {uv, vu} not in ({"="}, {"<", ">"}) or (uv == "=") != (u == v):
                failures += 1
            if uv == "<":
                if magnus_compare(mult(w, u), mult(w, v), max_degree) != "<":
                    failures += 1
                if magnus_compare(mult(u, w), mult(v, w), max_degree) != "<":
                    failures += 1
            vw = magnus_compare(v, w, max_degree)
            if uv == "<" and vw == "<":
                if magnus_compare(u, w, max_degree) != "<":
                    failures += 1
        except UndecidedComparison:
            undecided += 1
            continue
        if u and magnus_compare(EMPTY, u, max_degree) == "<":
            z = _density_witness(u, max_degree)
            if z is not None:
                density_checked += 1
                if not (magnus_compare(EMPTY, z, max_degree) == "<"
                        and magnus_compare(z, u, max_degree) == "<"):
                    failures += 1
    return {
        "trials": trials,
        "word_len": word_len,
        "max_degree": max_degree,
        "failures": failures,
        "undecided": undecided,
        "density_checked": density_checked,
        "ok": failures == 0 and undecided == 0,
    }


def _density_witness(u, max_degree):
    """A word strictly between the identity and a positive ``u``, if the
    conjugation trick applies within the degree bound."""
    for y in ((1,), (2,), (1, 2)):
        if mult(u, y) == mult(y, u):
            continue
        for t in (y, inv(y)):
            z = mult(mult(t, u), inv(t))
            if z == u:
                continue
            try:
                if magnus_compare(z, u, max_degree) == "<":
                    return z
            except UndecidedComparison:
                continue
        return None
    return None


def cayley_edge_invariance(seed=0, trials=2000, word_len=5, rng_seed=0):
    """Left translations preserve adjacency in the random Cayley graph.

    This is an exact identity (adjacency depends on x^-1 y only); the check
    exercises the implementation on random triples.
    """
    action = RadoF2Action(seed)
    rng = random.Random(rng_seed)
    for _ in range(trials):
        x = random_word(rng, word_len)
        y = random_word(rng, word_len)
        w = random_word(rng, word_len)
        if x == y:
            continue
        if action.adjacent(x, y) != action.adjacent(mult(w, x), mult(w, y)):
            raise InvariantViolation(
                f"translation by {w!r} broke the edge ({x!r}, {y!r})")
    return {"seed": seed, "trials": trials, "ok": True}


def cayley_extension_check(r=6, t=2, seeds=20):
    """Fraction of small adjacency prescriptions realized inside a ball.

    For every configuration of at most ``t`` vertices in the radius r-1
    ball split into must-link and must-avoid parts, look for a witness in
    the radius r ball.  The almost-sure statement this stands in for is
    asymptotic; the finite rate is reported, not asserted.
    """
    if isinstance(seeds, int):
        seeds = range(seeds)
    inner = list(ball(r - 1))
    outer = list(ball(r))
    index_of = {w: i for i, w in enumerate(outer)}
    full = (1 << len(outer)) - 1
    results = []
    for seed in seeds:
        action = RadoF2Action(seed)
        masks = []
        for x in inner:
            m = 0
            for z in outer:
                if action.adjacent(x, z):
                    m |= 1 << index_of[z]
            masks.append(m)
        total = 0
        witnessed = 0
        configs = []
        for i in range(len(inner)):
            configs.append(((i,), ()))
            configs.append(((), (i,)))
        for i, j in itertools.combinations(range(len(inner)), 2):
            configs.append(((i, j), ()))
            configs.append(((), (i, j)))
            configs.append(((i,), (j,)))
            configs.append(((j,), (i,)))
        if t < 2:
            configs = [c for c in configs if len(c[0]) + len(c[1]) <= t]
        for link, avoid in configs:
            m = full
            for i in link:
                m &= masks[i]
            for i in avoid:
                m &= ~masks[i]
            for i in link + avoid:
                m &= ~(1 << index_of[inner[i]])
            m &= full
            total += 1
            if m:
                witnessed += 1
        results.append({
            "seed": seed,
            "configs": total,
            "witnessed": witnessed,
            "rate": Fraction(witnessed, total),
        })
    mean = sum(row["rate"] for row in results) / len(results)
    return {
        "r": r,
        "t": t,
        "ball_inner": len(inner),
        "ball_outer": len(outer),
        "per_seed": results,
        "mean_rate": mean,
        "all_witnessed": all(
            row["witnessed"] == row["configs"] for row in results),
    }

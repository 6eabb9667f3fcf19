"""Deterministic finite permutation groups.

A permutation on n points is a tuple p of length n with p[i] the image of
i.  Composition is (g * h)(i) = g(h(i)), i.e. h acts first.  Everything
here is deterministic: the stabilizer chain uses the smallest moved point
at each level and BFS transversals in point order, so two runs over the
same generators produce identical data.  That determinism is load-bearing
for reproducible catalogs, which is why this module exists instead of
leaning on a library with randomized internals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidPermutation, NotASubgroup, SizeLimitExceeded


def identity(degree: int) -> tuple:
    return tuple(range(degree))


def compose(g: tuple, h: tuple) -> tuple:
    """g after h."""
    return tuple(g[x] for x in h)


def inverse(g: tuple) -> tuple:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def power(g: tuple, n: int) -> tuple:
    if n < 0:
        return power(inverse(g), -n)
    result = identity(len(g))
    base = g
    while n:
        if n & 1:
            result = compose(base, result)
        base = compose(base, base)
        n >>= 1
    return result


def cycle_type(g: tuple) -> tuple:
    """Cycle lengths sorted descending, fixed points included."""
    seen = [False] * len(g)
    lengths = []
    for start in range(len(g)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = g[x]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def perm_order(g: tuple) -> int:
    from math import lcm

    return lcm(*cycle_type(g)) if g else 1


def from_cycles(degree: int, cycles) -> tuple:
    out = list(range(degree))
    for cyc in cycles:
        for i, point in enumerate(cyc):
            out[point] = cyc[(i + 1) % len(cyc)]
    return tuple(out)


def validate_perm(p, degree: int) -> tuple:
    p = tuple(p)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise InvalidPermutation(f"not a permutation of {degree} points: {p!r}")
    return p


@dataclass(frozen=True)
class ConjClass:
    rep: tuple
    size: int
    order: int
    cycle_type: tuple


class PermGroup:
    """Group generated by permutations, with a deterministic BSGS."""

    def __init__(self, degree: int, generators) -> None:
        self.degree = degree
        self.generators = tuple(
            validate_perm(g, degree) for g in generators
        )
        self._base: list = []
        self._transversals: list = []  # dicts point -> coset rep
        self._strong_gens: list = []   # per level
        self._build_chain()
        self._elements: tuple | None = None
        self._classes: tuple | None = None
        self._class_index: dict | None = None

    # -- stabilizer chain ---------------------------------------------------

    def _orbit_transversal(self, point: int, gens: list) -> dict:
        trans = {point: identity(self.degree)}
        queue = [point]
        while queue:
            x = queue.pop(0)
            rep = trans[x]
            for g in gens:
                y = g[x]
                if y not in trans:
                    trans[y] = compose(g, rep)
                    queue.append(y)
        return trans

    def _build_chain(self) -> None:
        gens = [g for g in self.generators if g != identity(self.degree)]
        self._base, self._transversals, self._strong_gens = [], [], []
        level = 0
        while gens:
            moved = min(
                i for i in range(self.degree)
                if any(g[i] != i for g in gens)
            )
            self._base.append(moved)
            self._strong_gens.append(list(gens))
            trans = self._orbit_transversal(moved, gens)
            self._transversals.append(trans)
            # Schreier generators for the stabilizer of `moved`.
            stab: list = []
            stab_set = {identity(self.degree)}
            for x in sorted(trans):
                rep = trans[x]
                for g in gens:
                    sg = compose(inverse(trans[g[x]]), compose(g, rep))
                    residue = self._sift_partial(sg, level + 1, stab)
                    if residue is not None and residue not in stab_set:
                        stab.append(residue)
                        stab_set.add(residue)
            gens = stab
            level += 1

    def _sift_partial(self, g: tuple, start: int, extra: list):
        """Sift g through levels >= start plus the extra generators being
        accumulated; return the residue if it is a new nontrivial element."""
        for lvl in range(start, len(self._base)):
            x = g[self._base[lvl]]
            trans = self._transversals[lvl]
            if x not in trans:
                return g
            g = compose(inverse(trans[x]), g)
        if g == identity(self.degree):
            return None
        return g

    def sift(self, g: tuple):
        """Return the residue of g after sifting; identity iff g in G."""
        for lvl in range(len(self._base)):
            x = g[self._base[lvl]]
            trans = self._transversals[lvl]
            if x not in trans:
                return g
            g = compose(inverse(trans[x]), g)
        return g

    def __contains__(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        return self.sift(g) == identity(self.degree)

    @property
    def order(self) -> int:
        n = 1
        for trans in self._transversals:
            n *= len(trans)
        return n

    # -- element and class data ----------------------------------------------

    def elements(self, limit: int | None = None) -> tuple:
        """All elements, sorted.  Guarded so nobody materializes GL(5,2)."""
        if self._elements is None:
            if limit is not None and self.order > limit:
                raise SizeLimitExceeded(
                    f"group of order {self.order} exceeds element "
                    f"materialization limit {limit}"
                )
            # every g factors as t_0 t_1 ... t_{k-1} with t_i in level i's
            # transversal (that is what sift peels off, left to right)
            elems = [identity(self.degree)]
            for trans in reversed(self._transversals):
                reps = sorted(trans.values())
                elems = [compose(r, e) for r in reps for e in elems]
            self._elements = tuple(sorted(set(elems)))
            assert len(self._elements) == self.order
        elif limit is not None and len(self._elements) > limit:
            raise SizeLimitExceeded(
                f"group of order {self.order} exceeds element "
                f"materialization limit {limit}"
            )
        return self._elements

    def orbit(self, point: int) -> tuple:
        seen = {point}
        queue = [point]
        while queue:
            x = queue.pop(0)
            for g in self.generators:
                if g[x] not in seen:
                    seen.add(g[x])
                    queue.append(g[x])
        return tuple(sorted(seen))

    def pointwise_stabilizer(self, points) -> "PermGroup":
        """Subgroup fixing every point in `points`, via chain restriction."""
        sub = self
        for point in points:
            sub = sub._stabilizer_of(point)
        return sub

    def _stabilizer_of(self, point: int) -> "PermGroup":
        trans = self._orbit_transversal(point, list(self.generators))
        gens = []
        seen = {identity(self.degree)}
        for x in sorted(trans):
            rep = trans[x]
            for g in self.generators:
                sg = compose(inverse(trans[g[x]]), compose(g, rep))
                if sg not in seen:
                    seen.add(sg)
                    gens.append(sg)
        return PermGroup(self.degree, gens)

    def conjugacy_classes(self, limit: int | None = None) -> tuple:
        """ConjClass records sorted by (size, order, cycle_type, rep)."""
        if self._classes is None:
            elems = self.elements(limit)
            index_of = {g: i for i, g in enumerate(elems)}
            unassigned = set(range(len(elems)))
            raw = []
            class_of = [0] * len(elems)
            while unassigned:
                start = min(unassigned)
                members = {start}
                queue = [start]
                while queue:
                    i = queue.pop(0)
                    g = elems[i]
                    for s in self.generators:
                        cg = compose(s, compose(g, inverse(s)))
                        j = index_of[cg]
                        if j not in members:
                            members.add(j)
                            queue.append(j)
                unassigned -= members
                rep = min(elems[i] for i in members)
                raw.append((members, rep))
            records = []
            for members, rep in raw:
                records.append(
                    (ConjClass(rep, len(members), perm_order(rep),
                               cycle_type(rep)), members)
                )
            records.sort(
                key=lambda pair: (pair[0].size, pair[0].order,
                                  pair[0].cycle_type, pair[0].rep)
            )
            for idx, (_, members) in enumerate(records):
                for i in members:
                    class_of[i] = idx
            self._classes = tuple(rec for rec, _ in records)
            self._class_index = {
                elems[i]: class_of[i] for i in range(len(elems))
            }
        return self._classes

    def class_data(self, limit: int | None = None):
        classes = self.conjugacy_classes(limit)
        return classes, self._class_index

    # -- subgroup enumeration --------------------------------------------------

    def subgroups_up_to_conjugacy(self, limit: int = 2000) -> tuple:
        """One representative per conjugacy class of subgroups.

        BFS: extend each known subgroup by an element of prime power order
        (every subgroup is generated by such elements, since each of its
        elements' prime power parts lie in it), dedup by conjugate orbits of
        the full element sets.  Complete but exponential; the order guard
        keeps it honest.
        """
        if self.order > limit:
            raise SizeLimitExceeded(
                f"subgroup enumeration limited to order {limit}, "
                f"group has order {self.order}"
            )
        elems = self.elements(limit)
        pp_elems = []
        for g in elems:
            o = perm_order(g)
            if o > 1 and _is_prime_power(o):
                pp_elems.append(g)

        def conj_orbit(elem_set: frozenset) -> frozenset:
            orbit = {elem_set}
            queue = [elem_set]
            while queue:
                current = queue.pop(0)
                for s in self.generators:
                    s_inv = inverse(s)
                    moved = frozenset(
                        compose(s, compose(g, s_inv)) for g in current
                    )
                    if moved not in orbit:
                        orbit.add(moved)
                        queue.append(moved)
            return frozenset(orbit)

        triv = frozenset({identity(self.degree)})
        seen_sets = {triv}
        seen_orbits = [frozenset({triv})]
        frontier = [triv]
        found = [triv]
        while frontier:
            nxt = []
            for current in frontier:
                for g in pp_elems:
                    if g in current:
                        continue
                    grown = _closure(current | {g}, self.degree)
                    if grown in seen_sets:
                        continue
                    orbit = conj_orbit(grown)
                    seen_sets |= orbit
                    seen_orbits.append(orbit)
                    found.append(min(orbit, key=sorted))
                    nxt.append(grown)
            frontier = nxt
        reps = [tuple(sorted(s)) for s in found]
        reps.sort(key=lambda s: (len(s), s))
        return tuple(
            PermGroup(self.degree, [g for g in rep if g != identity(self.degree)]
                      or [identity(self.degree)])
            for rep in reps
        )

    # -- coset actions ----------------------------------------------------------

    def coset_action(self, sub: "PermGroup", limit: int | None = None) -> "CosetAction":
        return CosetAction(self, sub, limit)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"


def _is_prime_power(n: int) -> bool:
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


def _closure(seed: set, degree: int) -> frozenset:
    elems = set(seed)
    elems.add(identity(degree))
    frontier = list(elems)
    while frontier:
        g = frontier.pop()
        for h in list(elems):
            for prod in (compose(g, h), compose(h, g)):
                if prod not in elems:
                    elems.add(prod)
                    frontier.append(prod)
    return frozenset(elems)


class CosetAction:
    """Action of G on left cosets gK, with deterministic coset numbering.

    Cosets are numbered by their minimal element (as a tuple), sorted; the
    action permutation of g sends the index of hK to that of (gh)K.
    """

    def __init__(self, group: PermGroup, sub: PermGroup, limit: int | None = None):
        if sub.degree != group.degree:
            raise NotASubgroup("degree mismatch")
        for g in sub.generators:
            if g not in group:
                raise NotASubgroup(f"generator {g!r} lies outside the group")
        self.group = group
        self.sub = sub
        elems = group.elements(limit)
        sub_elems = set(sub.elements(limit))
        assigned: dict = {}
        reps = []
        for g in elems:  # sorted, so the first of each coset is minimal
            if g in assigned:
                continue
            idx = len(reps)
            reps.append(g)
            for k in sub_elems:
                assigned[compose(g, k)] = idx
        self.reps = tuple(reps)
        self._coset_of = assigned
        self.size = len(reps)

    def act(self, g: tuple) -> tuple:
        return tuple(
            self._coset_of[compose(g, rep)] for rep in self.reps
        )

    def character_value(self, g: tuple) -> int:
        return sum(
            1 for i, rep in enumerate(self.reps)
            if self._coset_of[compose(g, rep)] == i
        )


def symmetric_group(n: int) -> PermGroup:
    if n <= 1:
        return PermGroup(max(n, 1), [])
    gens = [from_cycles(n, [tuple(range(n))]), from_cycles(n, [(0, 1)])]
    return PermGroup(n, gens)


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, [])


def cyclic_group(degree: int, g: tuple) -> PermGroup:
    return PermGroup(degree, [g])

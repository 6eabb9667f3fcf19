import itertools
import random

import pytest

from oligorep.errors import MalformedStructure, SizeLimitExceeded
from oligorep.finstruct import (
    FinStructure,
    get_class,
    empty_structure,
    set_partitions,
    structure_from_json,
    structure_to_json,
)


def relabeled(cls, s, perm):
    """Rename point i to position perm[i], transporting the payload."""
    n = len(s.points)
    points = [None] * n
    for i in range(n):
        points[perm[i]] = s.points[i]
    if s.cls == "pure_set":
        data = None
    elif s.cls == "linear_order":
        ranks = [0] * n
        for i in range(n):
            ranks[perm[i]] = s.data[i]
        data = tuple(ranks)
    elif s.cls == "graph":
        data = frozenset(frozenset(perm[v] for v in e) for e in s.data)
    elif s.cls in ("vector_space", "vector_space_q3"):
        q, vectors = s.data
        moved = [None] * n
        for i in range(n):
            moved[perm[i]] = vectors[i]
        data = (q, tuple(moved))
    else:
        n_atoms, masks = s.data
        moved = [None] * n
        for i in range(n):
            moved[perm[i]] = masks[i]
        data = (n_atoms, tuple(moved))
    return cls.make(points, data)


def graph_on(n, edges):
    return get_class("graph").make(
        tuple(range(n)), frozenset(frozenset(e) for e in edges))


def brute_automorphisms(cls, s):
    """Filter all position permutations that preserve the payload."""
    n = len(s.points)
    count = 0
    for perm in itertools.permutations(range(n)):
        if s.cls == "linear_order":
            ok = all(
                (s.data[i] < s.data[j]) == (s.data[perm[i]] < s.data[perm[j]])
                for i in range(n) for j in range(n))
        elif s.cls == "graph":
            ok = all(
                (frozenset((i, j)) in s.data)
                == (frozenset((perm[i], perm[j])) in s.data)
                for i in range(n) for j in range(i + 1, n))
        elif s.cls in ("vector_space", "vector_space_q3"):
            q, vectors = s.data
            index = {v: k for k, v in enumerate(vectors)}
            ok = True
            for i in range(n):
                for j in range(n):
                    total = tuple((a + b) % q for a, b in zip(vectors[i], vectors[j]))
                    if perm[index[total]] != index[
                            tuple((a + b) % q for a, b in zip(
                                vectors[perm[i]], vectors[perm[j]]))]:
                        ok = False
                        break
                if not ok:
                    break
        else:
            n_atoms, masks = s.data
            index = {m: k for k, m in enumerate(masks)}
            full = (1 << n_atoms) - 1
            ok = all(
                perm[index[masks[i] & masks[j]]]
                == index[masks[perm[i]] & masks[perm[j]]]
                for i in range(n) for j in range(n)) and all(
                perm[index[masks[i] ^ full]] == index[masks[perm[i]] ^ full]
                for i in range(n))
        if ok:
            count += 1
    return count


# ---------------------------------------------------------------------------
# validation and membership


def test_validate_rejects_malformed():
    pure = get_class("pure_set")
    with pytest.raises(MalformedStructure):
        pure.make((0, 0), None)
    with pytest.raises(MalformedStructure):
        pure.make((0, 1), frozenset())
    order = get_class("linear_order")
    with pytest.raises(MalformedStructure):
        order.make((0, 1), (0, 2))
    graph = get_class("graph")
    with pytest.raises(MalformedStructure):
        graph.make((0, 1), frozenset({frozenset({0})}))
    with pytest.raises(MalformedStructure):
        graph.make((0, 1), frozenset({frozenset({0, 5})}))
    vs = get_class("vector_space")
    with pytest.raises(MalformedStructure):
        vs.make((0,), (3, ((0,),)))
    with pytest.raises(MalformedStructure):
        vs.make((0, 1), (2, ((0,), (0,))))
    boolean = get_class("boolean_algebra")
    with pytest.raises(MalformedStructure):
        boolean.make((0, 1), (1, (0, 5)))


def test_membership_requires_closure():
    vs = get_class("vector_space")
    no_zero = vs.make((0,), (2, ((1,),)))
    assert not vs.is_member(no_zero)
    closed = vs.make((0, 1), (2, ((0,), (1,))))
    assert vs.is_member(closed)
    not_closed = vs.make((0, 1, 2), (2, ((0, 0), (1, 0), (0, 1))))
    assert not vs.is_member(not_closed)
    boolean = get_class("boolean_algebra")
    assert boolean.is_member(boolean.canonical_algebra(2))
    missing = boolean.make((0, 1, 2), (2, (0, 1, 3)))
    assert not boolean.is_member(missing)
    assert vs.is_member(vs.empty())
    assert boolean.is_member(boolean.empty())


def test_every_class_accepts_empty():
    for class_id in ("pure_set", "linear_order", "graph",
                     "vector_space", "vector_space_q3", "boolean_algebra"):
        cls = get_class(class_id)
        e = empty_structure(class_id)
        assert cls.is_member(e)
        assert cls.size(e) == 0
        assert cls.acl(e, ()) == ()


# ---------------------------------------------------------------------------
# canonical forms


def test_four_vertex_graphs_have_eleven_codes():
    graph = get_class("graph")
    pairs = list(itertools.combinations(range(4), 2))
    codes = set()
    for mask in range(1 << 6):
        edges = [pairs[i] for i in range(6) if mask >> i & 1]
        codes.add(graph.canonical_code(graph_on(4, edges)))
    assert len(codes) == 11


def test_codes_separate_same_degree_graphs():
    graph = get_class("graph")
    path = graph_on(4, [(0, 1), (1, 2), (2, 3)])
    star = graph_on(4, [(0, 1), (0, 2), (0, 3)])
    assert graph.canonical_code(path) != graph.canonical_code(star)


def test_canonical_code_invariant_under_relabeling():
    rng = random.Random(17)
    samples = []
    graph = get_class("graph")
    samples.append((graph, graph_on(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])))
    samples.append((graph, graph_on(6, [(0, 1), (2, 3), (4, 5), (1, 2)])))
    order = get_class("linear_order")
    samples.append((order, order.make((10, 11, 12, 13), (2, 0, 3, 1))))
    vs = get_class("vector_space")
    samples.append((vs, vs.canonical_space(2)))
    boolean = get_class("boolean_algebra")
    samples.append((boolean, boolean.canonical_algebra(3)))
    for cls, s in samples:
        base_code = cls.canonical_code(s)
        n = len(s.points)
        for _ in range(20):
            perm = list(range(n))
            rng.shuffle(perm)
            other = relabeled(cls, s, tuple(perm))
            assert cls.canonical_code(other) == base_code
            assert cls.automorphisms(other).order == cls.automorphisms(s).order


def test_canonical_relabel_is_an_isomorphism():
    graph = get_class("graph")
    s = graph_on(5, [(0, 2), (2, 4), (4, 1), (1, 3)])
    canon, rel = graph.canonical(s)
    for e in s.data:
        a, b = tuple(e)
        assert frozenset((rel[a], rel[b])) in canon.data
    assert len(canon.data) == len(s.data)


def test_vector_space_code_ignores_ambient_coordinates():
    vs = get_class("vector_space")
    plane = vs.make(
        ("o", "a", "b", "c"),
        (2, ((0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1))))
    assert vs.is_member(plane)
    assert vs.canonical_code(plane) == vs.canonical_code(vs.canonical_space(2))
    canon, rel = vs.canonical(plane)
    assert sorted(rel) == [0, 1, 2, 3]


def test_boolean_code_counts_atoms():
    boolean = get_class("boolean_algebra")
    sub = boolean.make(
        ("bot", "x", "y", "top"), (3, (0, 3, 4, 7)))
    assert boolean.is_member(sub)
    assert boolean.canonical_code(sub) == boolean.canonical_code(
        boolean.canonical_algebra(2))
    assert boolean.size(sub) == 2


# ---------------------------------------------------------------------------
# automorphisms


def test_automorphism_orders_match_brute_force():
    graph = get_class("graph")
    cases = [
        (graph, graph_on(3, [(0, 1)])),
        (graph, graph_on(3, [(0, 1), (1, 2), (0, 2)])),
        (graph, graph_on(4, [(0, 1), (1, 2), (2, 3), (0, 3)])),
        (graph, graph_on(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])),
        (get_class("linear_order"), get_class("linear_order").make(
            (0, 1, 2), (1, 2, 0))),
        (get_class("vector_space"), get_class("vector_space").canonical_space(2)),
        (get_class("boolean_algebra"),
         get_class("boolean_algebra").canonical_algebra(2)),
        (get_class("boolean_algebra"),
         get_class("boolean_algebra").canonical_algebra(3)),
    ]
    for cls, s in cases:
        assert cls.automorphisms(s).order == brute_automorphisms(cls, s)


def test_all_four_vertex_graph_automorphisms():
    graph = get_class("graph")
    pairs = list(itertools.combinations(range(4), 2))
    for mask in range(1 << 6):
        s = graph_on(4, [pairs[i] for i in range(6) if mask >> i & 1])
        assert graph.automorphisms(s).order == brute_automorphisms(graph, s)


def test_general_linear_group_orders():
    vs2 = get_class("vector_space")
    assert vs2.automorphisms(vs2.canonical_space(1)).order == 1
    assert vs2.automorphisms(vs2.canonical_space(2)).order == 6
    assert vs2.automorphisms(vs2.canonical_space(3)).order == 168
    assert vs2.automorphisms(vs2.canonical_space(4)).order == 20160
    vs3 = get_class("vector_space_q3")
    assert vs3.automorphisms(vs3.canonical_space(1)).order == 2
    assert vs3.automorphisms(vs3.canonical_space(2)).order == 48
    assert vs3.automorphisms(vs3.canonical_space(3)).order == 11232


def test_symmetric_groups_on_points_and_atoms():
    pure = get_class("pure_set")
    five = pure.make(tuple(range(5)), None)
    assert pure.automorphisms(five).order == 120
    boolean = get_class("boolean_algebra")
    assert boolean.automorphisms(boolean.canonical_algebra(4)).order == 24
    order = get_class("linear_order")
    chain = order.make(tuple(range(4)), (0, 1, 2, 3))
    assert order.automorphisms(chain).order == 1


# ---------------------------------------------------------------------------
# algebraic closure


def test_acl_identity_for_relational_classes():
    graph = get_class("graph")
    s = graph_on(4, [(0, 1), (2, 3)])
    assert graph.acl(s, (1, 3)) == (1, 3)
    assert get_class("pure_set").acl(
        get_class("pure_set").make((0, 1, 2), None), (2,)) == (2,)


def test_acl_spans_vector_spaces():
    vs = get_class("vector_space")
    space = vs.canonical_space(2)
    v10 = space.data[1].index((1, 0))
    closure = vs.acl(space, (v10,))
    got = {space.data[1][p] for p in closure}
    assert got == {(0, 0), (1, 0)}
    both = vs.acl(space, (1, 2))
    assert both == (0, 1, 2, 3)
    assert vs.acl(space, ()) == ()


def test_acl_generates_boolean_subalgebras():
    boolean = get_class("boolean_algebra")
    algebra = boolean.canonical_algebra(3)
    closure = boolean.acl(algebra, (3,))
    masks = {algebra.data[1][p] for p in closure}
    assert masks == {0, 3, 4, 7}
    assert boolean.acl(algebra, ()) == ()
    assert boolean.acl(algebra, (1, 2)) == tuple(range(8))


def test_acl_is_idempotent_and_member():
    vs = get_class("vector_space_q3")
    space = vs.canonical_space(2)
    closure = vs.acl(space, (4,))
    again = vs.acl(space, closure)
    assert closure == again
    assert vs.is_member(vs.induced(space, closure))


def test_fixed_points():
    vs = get_class("vector_space")
    space = vs.canonical_space(2)
    assert vs.fixed_point_indices(space) == (0,)
    boolean = get_class("boolean_algebra")
    algebra = boolean.canonical_algebra(2)
    assert boolean.fixed_point_indices(algebra) == (0, 3)
    assert boolean.is_fixed_only(boolean.canonical_algebra(1))
    assert not boolean.is_fixed_only(algebra)
    assert not vs.is_fixed_only(vs.empty())
    assert vs.is_fixed_only(vs.induced(space, (0,)))
    assert get_class("graph").fixed_point_indices(graph_on(3, [(0, 1)])) == ()


# ---------------------------------------------------------------------------
# enumeration of structures


def test_enumerate_pure_sets():
    pure = get_class("pure_set")
    reps = pure.enumerate_class(3)
    assert len(reps) == 4
    assert [pure.size(r) for r in reps] == [0, 1, 2, 3]


def test_enumerate_linear_orders():
    order = get_class("linear_order")
    assert len(order.enumerate_class(5)) == 6


def test_enumerate_graphs():
    graph = get_class("graph")
    reps = graph.enumerate_class(6)
    by_size = {}
    for r in reps:
        by_size[len(r.points)] = by_size.get(len(r.points), 0) + 1
    assert [by_size.get(n, 0) for n in range(7)] == [1, 1, 2, 4, 11, 34, 156]
    codes = [graph.canonical_code(r) for r in reps]
    assert len(set(codes)) == len(reps)


def test_enumerate_vector_spaces():
    vs = get_class("vector_space")
    reps = vs.enumerate_class(3)
    assert len(reps) == 5
    assert sorted(len(r.points) for r in reps) == [0, 1, 2, 4, 8]
    vs3 = get_class("vector_space_q3")
    reps3 = vs3.enumerate_class(2)
    assert sorted(len(r.points) for r in reps3) == [0, 1, 3, 9]


def test_enumerate_boolean_algebras():
    boolean = get_class("boolean_algebra")
    reps = boolean.enumerate_class(3)
    assert len(reps) == 4
    assert [boolean.size(r) for r in reps] == [0, 1, 2, 3]
    assert [len(r.points) for r in reps] == [0, 2, 4, 8]


# ---------------------------------------------------------------------------
# tuple types


def bell_numbers(limit):
    table = [[1]]
    for n in range(1, limit + 1):
        row = [table[-1][-1]]
        for entry in table[-1]:
            row.append(row[-1] + entry)
        table.append(row)
    return [table[n][0] for n in range(limit + 1)]


def ordered_bell(limit):
    from math import comb
    values = [1]
    for n in range(1, limit + 1):
        values.append(sum(comb(n, k) * values[n - k] for k in range(1, n + 1)))
    return values


def stirling_table(limit):
    table = [[1] + [0] * limit]
    for n in range(1, limit + 1):
        row = [0] * (limit + 1)
        for k in range(1, n + 1):
            row[k] = table[n - 1][k - 1] + k * table[n - 1][k]
        table.append(row)
    return table


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def test_partition_generator_matches_bell():
    bells = bell_numbers(6)
    for n in range(7):
        assert sum(1 for _ in set_partitions(n)) == bells[n]


def test_pure_set_tuple_type_counts():
    pure = get_class("pure_set")
    bells = bell_numbers(5)
    for n in range(6):
        types = pure.enumerate_tuple_types(n)
        assert len(types) == bells[n]
        assert len(types) == len(pure.enumerate_tuple_types(n, x0_only=True))


def test_linear_order_tuple_type_counts():
    order = get_class("linear_order")
    expected = ordered_bell(5)
    for n in range(6):
        assert len(order.enumerate_tuple_types(n)) == expected[n]


def test_graph_tuple_type_counts():
    graph = get_class("graph")
    stirling = stirling_table(5)
    for n in range(6):
        expected = sum(
            stirling[n][k] * 2 ** (k * (k - 1) // 2) for k in range(n + 1))
        assert len(graph.enumerate_tuple_types(n)) == expected
    assert len(graph.enumerate_tuple_types(2)) == 3
    assert len(graph.enumerate_tuple_types(4)) == 127


def test_vector_space_tuple_type_counts():
    vs = get_class("vector_space")
    for n in range(5):
        expected = sum(gaussian_binomial(n, k, 2) for k in range(n + 1))
        assert len(vs.enumerate_tuple_types(n)) == expected
    vs3 = get_class("vector_space_q3")
    for n in range(5):
        expected = sum(gaussian_binomial(n, k, 3) for k in range(n + 1))
        assert len(vs3.enumerate_tuple_types(n)) == expected
    assert len(vs.enumerate_tuple_types(1)) == 2
    assert len(vs.enumerate_tuple_types(1, x0_only=True)) == 1
    assert len(vs.enumerate_tuple_types(2, x0_only=True)) == 2


def test_boolean_tuple_type_counts():
    boolean = get_class("boolean_algebra")
    for n in range(4):
        assert len(boolean.enumerate_tuple_types(n)) == 2 ** (2 ** n) - 1
    assert len(boolean.enumerate_tuple_types(1, x0_only=True)) == 1
    brute = 0
    for pattern in range(1, 16):
        cells = [c for c in range(4) if pattern >> c & 1]
        constant = False
        for i in range(2):
            bits = {c >> i & 1 for c in cells}
            if len(bits) == 1:
                constant = True
        if not constant:
            brute += 1
    assert len(boolean.enumerate_tuple_types(2, x0_only=True)) == brute
    with pytest.raises(SizeLimitExceeded):
        boolean.enumerate_tuple_types(5)


def test_marked_cores_pure_set():
    pure = get_class("pure_set")
    types = pure.enumerate_tuple_types(2)
    cores = {pure.marked_core(t)[1] for t in types}
    assert cores == {(0, 0), (0, 1)}


def test_marked_cores_vector_space():
    vs = get_class("vector_space")
    for t in vs.enumerate_tuple_types(2):
        base, marked = vs.marked_core(t)
        assert vs.is_member(base)
        dim = vs.size(base)
        span = vs.acl(base, marked) if marked else ()
        if dim:
            assert len(span) == 2 ** dim
    zero_type = [t for t in vs.enumerate_tuple_types(1)
                 if vs._touches_fixed(t)]
    base, marked = vs.marked_core(zero_type[0])
    assert vs.size(base) == 0
    assert marked == (0,)


def test_marked_cores_boolean():
    boolean = get_class("boolean_algebra")
    for t in boolean.enumerate_tuple_types(2):
        base, marked = boolean.marked_core(t)
        assert boolean.is_member(base)
        assert boolean.acl(base, marked) == tuple(range(len(base.points)))
        for m in marked:
            assert 0 <= m < len(base.points)


def test_marked_cores_generate_relational():
    graph = get_class("graph")
    for t in graph.enumerate_tuple_types(3):
        base, marked = graph.marked_core(t)
        assert set(marked) == set(range(len(base.points)))


# ---------------------------------------------------------------------------
# hereditarity and serialization


def test_induced_substructures_stay_in_class():
    graph = get_class("graph")
    s = graph_on(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    for k in range(6):
        for subset in itertools.combinations(range(5), k):
            assert graph.is_member(graph.induced(s, subset))
    vs = get_class("vector_space")
    space = vs.canonical_space(3)
    closure = vs.acl(space, (1, 2))
    assert vs.is_member(vs.induced(space, closure))


def test_json_round_trip():
    cases = [
        get_class("pure_set").make((0, 1, 2), None),
        get_class("linear_order").make(("a", "b"), (1, 0)),
        graph_on(3, [(0, 2)]),
        get_class("vector_space").canonical_space(2),
        get_class("boolean_algebra").canonical_algebra(2),
    ]
    for s in cases:
        doc = structure_to_json(s)
        back = structure_from_json(doc)
        assert back == s
    with pytest.raises(MalformedStructure):
        structure_from_json({"class": "no_such_class", "points": [], "data": {}})
    with pytest.raises(MalformedStructure):
        structure_from_json({"points": []})

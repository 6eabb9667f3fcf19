import json
import math

import pytest

from oligorep.chartab import (
    Cyc,
    CharacterTable,
    SymmetricCharacterTable,
    character_table,
    hook_degree,
    mn_value,
    partitions_of,
    symmetric_character_table,
)
from oligorep.errors import NotACharacter
from oligorep.permgrp import (
    CosetAction,
    PermGroup,
    from_cycles,
    identity,
    symmetric_group,
    trivial_group,
)


# -- cyclotomic arithmetic ----------------------------------------------------

def test_cyc_basics():
    z4 = Cyc.root(4, 1)
    assert z4 * z4 == -1
    assert z4 * z4 * z4 * z4 == 1
    assert z4.conj() == -z4
    assert (z4 + 1) - z4 == 1
    assert Cyc.from_int(4, 0).is_int()
    assert Cyc.from_int(4, 0).as_int() == 0


def test_cyc_third_roots():
    z = Cyc.root(3, 1)
    assert z + Cyc.root(3, 2) + 1 == 0
    assert z * z == Cyc.root(3, 2)
    assert (z * z.conj()) == 1
    assert not z.is_int()
    with pytest.raises(ValueError):
        z.as_int()


def test_cyc_norm_of_gauss_sum():
    # (z5 + z5^4) * (z5^2 + z5^3) = z5 + z5^2 + z5^3 + z5^4 = -1
    a = Cyc.root(5, 1) + Cyc.root(5, 4)
    b = Cyc.root(5, 2) + Cyc.root(5, 3)
    assert a * b == -1
    assert a + b == -1


# -- Dixon tables -------------------------------------------------------------

def test_trivial_group_table():
    t = character_table(trivial_group(1))
    assert t.degrees == (1,)
    assert t.rows[0][0] == 1


def test_c2_table():
    t = character_table(PermGroup(2, [(1, 0)]))
    assert t.degrees == (1, 1)
    assert [[v.as_int() for v in row] for row in t.rows] == [[1, 1], [1, -1]]


def test_s3_table_frozen():
    t = character_table(symmetric_group(3))
    assert t.degrees == (1, 1, 2)
    assert t.class_sizes == (1, 2, 3)
    assert t.class_orders == (1, 3, 2)
    assert [[v.as_int() for v in row] for row in t.rows] == [
        [1, 1, 1],
        [1, 1, -1],
        [2, -1, 0],
    ]


def test_s3_perm_character_and_decompose():
    G = symmetric_group(3)
    t = character_table(G)
    act = CosetAction(G, G.pointwise_stabilizer([0]))
    chi = t.perm_character(act)
    assert chi == (3, 0, 1)
    assert t.decompose(chi) == (1, 0, 1)
    regular = t.perm_character(CosetAction(G, trivial_group(3)))
    assert regular == (6, 0, 0)
    assert t.decompose(regular) == (1, 1, 2)


def test_c2_regular_character():
    G = PermGroup(2, [(1, 0)])
    t = character_table(G)
    chi = t.perm_character(CosetAction(G, trivial_group(2)))
    assert chi == (2, 0)
    assert t.decompose(chi) == (1, 1)


def test_s4_table():
    G = symmetric_group(4)
    t = character_table(G)
    assert t.degrees == (1, 1, 2, 3, 3)
    assert sum(d * d for d in t.degrees) == 24
    act = CosetAction(G, G.pointwise_stabilizer([0]))
    chi = t.perm_character(act)
    assert chi == (4, 0, 2, 0, 1)
    assert t.decompose(chi) == (1, 0, 0, 1, 0)


def test_c6_table():
    G = PermGroup(6, [from_cycles(6, [tuple(range(6))])])
    t = character_table(G)
    assert t.degrees == (1,) * 6
    assert t.num_classes == 6
    # the order-6 generator column carries all sixth roots of unity
    gen_col = sorted(
        str(t.rows[i][t.class_of_perm(from_cycles(6, [tuple(range(6))]))])
        for i in range(6)
    )
    assert len(set(gen_col)) == 6


def test_gl22_is_s3():
    # GL(2,2) permuting the 3 nonzero vectors 01, 10, 11
    a = (1, 0, 2)  # swap e1, e2
    b = (2, 1, 0)  # e1 -> e1+e2 fixing e2: 01->01? mapping on {01,10,11}
    G = PermGroup(3, [a, b])
    assert G.order == 6
    t = character_table(G)
    assert t.degrees == (1, 1, 2)


def test_decompose_rejects_non_characters():
    t = character_table(symmetric_group(3))
    with pytest.raises(NotACharacter):
        t.decompose((1, 1, 0))  # non-integral multiplicities
    with pytest.raises(NotACharacter):
        t.decompose((1, 1, -3))  # negative multiplicity of sign character
    with pytest.raises(NotACharacter):
        t.decompose((1, 1))


def test_decompose_random_combinations_roundtrip():
    import random

    t = character_table(symmetric_group(4))
    rng = random.Random(5)
    for _ in range(20):
        mults = tuple(rng.randrange(4) for _ in range(t.num_classes))
        values = []
        for c in range(t.num_classes):
            acc = Cyc.from_int(t.exponent, 0)
            for i, m in enumerate(mults):
                acc = acc + t.rows[i][c] * m
            values.append(acc)
        assert t.decompose(values) == mults


def test_burnside_and_degree_sum():
    for G in (symmetric_group(3), symmetric_group(4)):
        t = character_table(G)
        assert sum(d * d for d in t.degrees) == G.order
        for K in G.subgroups_up_to_conjugacy():
            act = CosetAction(G, K)
            mults = t.decompose(t.perm_character(act))
            assert mults[0] == 1  # coset actions are transitive
            assert sum(m * d for m, d in zip(mults, t.degrees)) == act.size


def test_frobenius_reciprocity_small_groups():
    # multiplicity of chi in the G/K permutation character equals the
    # average of chi over K
    for G in (symmetric_group(3), symmetric_group(4)):
        t = character_table(G)
        for K in G.subgroups_up_to_conjugacy():
            mults = t.decompose(t.perm_character(CosetAction(G, K)))
            for i in range(t.num_classes):
                acc = Cyc.from_int(t.exponent, 0)
                for x in K.elements():
                    acc = acc + t.rows[i][t.class_of_perm(x)]
                assert acc == mults[i] * K.order


def test_export_is_json_ready():
    t = character_table(symmetric_group(3))
    blob = json.dumps(t.export())
    data = json.loads(blob)
    assert data["degrees"] == [1, 1, 2]
    assert data["classes"][0]["size"] == 1
    t6 = character_table(PermGroup(6, [from_cycles(6, [tuple(range(6))])]))
    data6 = json.loads(json.dumps(t6.export()))
    nonint = [
        v for row in data6["irreps"] for v in row if isinstance(v, dict)
    ]
    assert nonint and all(set(v) == {"order", "coeffs"} for v in nonint)


# -- symmetric group tables ---------------------------------------------------

def test_partitions():
    assert partitions_of(0) == ((),)
    assert partitions_of(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert len(partitions_of(6)) == 11
    assert len(partitions_of(16)) == 231


def test_hook_degrees():
    assert hook_degree((3,)) == 1
    assert hook_degree((1, 1, 1)) == 1
    assert hook_degree((2, 1)) == 2
    assert hook_degree((3, 1)) == 3
    assert hook_degree((2, 2)) == 2
    assert hook_degree((3, 2)) == 5
    assert hook_degree((4, 2)) == 9


def test_mn_values():
    # chi_(2,1): degree 2, vanishes on transpositions, -1 on 3-cycles
    assert mn_value((2, 1), (1, 1, 1)) == 2
    assert mn_value((2, 1), (2, 1)) == 0
    assert mn_value((2, 1), (3,)) == -1
    # trivial and sign rows
    for mu in partitions_of(5):
        assert mn_value((5,), mu) == 1
        assert mn_value((1, 1, 1, 1, 1), mu) == (-1) ** (5 - len(mu))


def test_mn_degrees_match_hooks():
    for m in range(1, 8):
        ones = (1,) * m
        for lam in partitions_of(m):
            assert mn_value(lam, ones) == hook_degree(lam)


def test_symmetric_table_matches_dixon():
    for m in (2, 3, 4, 5):
        sym = symmetric_character_table(m)
        dix = character_table(symmetric_group(m))
        assert sym.degrees == dix.degrees
        assert sym.class_sizes == dix.class_sizes
        assert sym.class_orders == dix.class_orders
        # class t of the symmetric table is the cycle-type class of dix
        assert tuple(c.cycle_type for c in dix.classes) == sym.class_partitions
        for i in range(sym.num_classes):
            for t in range(sym.num_classes):
                assert dix.rows[i][t] == sym.value(i, t)


def test_symmetric_table_s6():
    sym = symmetric_character_table(6)
    assert sym.num_classes == 11
    assert sum(d * d for d in sym.degrees) == 720
    assert sym.degrees[0] == 1
    assert sym.irrep_partitions[0] == (6,)  # trivial first


def test_symmetric_table_large_is_lazy():
    import time

    start = time.monotonic()
    sym = symmetric_character_table(16)
    assert sym.num_classes == 231
    assert sum(d * d for d in sym.degrees) == math.factorial(16)
    regular = [0] * sym.num_classes
    regular[0] = sym.group_order
    assert sym.decompose(regular) == sym.degrees
    assert time.monotonic() - start < 5.0


def test_symmetric_decompose():
    sym = symmetric_character_table(4)
    natural = []
    for lam in sym.class_partitions:
        natural.append(sum(1 for part in lam if part == 1))
    mults = sym.decompose(tuple(natural))
    assert mults == (1, 0, 0, 1, 0)
    with pytest.raises(NotACharacter):
        sym.decompose((1, 0, 0, 0, 1))


def test_symmetric_class_of_perm():
    sym = symmetric_character_table(4)
    assert sym.class_of_perm(identity(4)) == 0
    i = sym.class_of_perm(from_cycles(4, [(0, 1)]))
    assert sym.class_partitions[i] == (2, 1, 1)
    assert sym.class_of_partition((1, 2, 1)) == i


def test_symmetric_export():
    sym = symmetric_character_table(3)
    data = json.loads(json.dumps(sym.export()))
    assert data["degrees"] == [1, 1, 2]
    assert data["irreps"][0] == [1, 1, 1]

import pytest

from maxsub.catalog import alt, builtin, cyc, sym
from maxsub.group import core, direct_product, group_from_generators, is_normal
from maxsub.lattice import maximal_subgroups
from maxsub.perms import parse_cycles
from maxsub.structure import (associated_primitive, chief_series,
                              classify_maximal, complement_solution_count,
                              crowns, describe_factor, ensure_factor_flags,
                              g_connected, g_isomorphic,
                              minimal_normal_subgroups)


def factor_orders(G, seed=0):
    return [d.order for d in chief_series(G, seed=seed)]


def test_chief_series_s4():
    facs = chief_series(sym(4))
    assert [d.order for d in facs] == [4, 3, 2]
    assert all(d.abelian for d in facs)
    total = 1
    for d in facs:
        total *= d.order
    assert total == 24


def test_chief_series_a5():
    facs = chief_series(alt(5))
    assert len(facs) == 1
    d = facs[0]
    assert d.order == 60 and not d.abelian
    assert d.simple_id == "Alt(5)"
    assert d.copies == 1
    assert d.centralizer.order == 1


def test_chief_orders_product_equals_group_order():
    for make in (lambda: sym(4), lambda: sym(5), lambda: cyc(12),
                 lambda: builtin("sl:2,3"), lambda: builtin("agl:1,8"),
                 lambda: builtin("agammal:1,8"), lambda: alt(4)):
        G = make()
        total = 1
        for d in chief_series(G):
            total *= d.order
        assert total == G.order


def test_jordan_holder_stability():
    G = builtin("sl:2,3")
    fingerprints = set()
    for seed in range(5):
        G2 = builtin("sl:2,3")  # fresh handle: no cross-seed cache reuse
        facs = chief_series(G2, seed=seed)
        for d in facs:
            ensure_factor_flags(G2, d)
        fp = tuple(sorted((d.order, d.abelian, d.simple_id or "",
                           d.frattini, d.complemented) for d in facs))
        fingerprints.add(fp)
    assert len(fingerprints) == 1


def test_minimal_normals_s4():
    mins = minimal_normal_subgroups(sym(4))
    assert [N.order for N in mins] == [4]


def test_minimal_normals_a5xc2():
    P, _, _ = direct_product([alt(5), cyc(2)])
    assert sorted(N.order for N in minimal_normal_subgroups(P)) == [2, 60]


def test_minimal_normals_agl32():
    G = builtin("agl:3,2")
    mins = minimal_normal_subgroups(G)
    assert [N.order for N in mins] == [8]


def test_complemented_v4_in_s4():
    G = sym(4)
    facs = chief_series(G)
    v4_factor = facs[0]
    assert v4_factor.order == 4
    ensure_factor_flags(G, v4_factor)
    assert v4_factor.complemented is True
    assert v4_factor.frattini is False


def test_frattini_factor_of_c4():
    G = cyc(4)
    facs = chief_series(G)
    for d in facs:
        ensure_factor_flags(G, d)
    # the lower C2 is the Frattini subgroup of C4: not complemented
    assert [d.complemented for d in facs] == [False, True]


def test_complement_count_matches_h1():
    # number of complements of V4 in S4 is |V4| * |H^1(S3, V4)| = 4
    G = sym(4)
    facs = chief_series(G)
    H = facs[0].section.upper
    K = facs[0].section.lower
    assert complement_solution_count(G, H, K) == 4


def test_g_isomorphic_reflexive_and_c3_pairs():
    P, _, _ = direct_product([cyc(3), cyc(3)])
    facs = chief_series(P)
    assert len(facs) == 2
    assert g_isomorphic(P, facs[0], facs[0])
    # both factors are central of order 3: G-isomorphic
    assert g_isomorphic(P, facs[0], facs[1])


def test_g_isomorphic_distinguishes_action():
    # C3 x S3: central C3 versus the natural C3 inside S3
    P, _, _ = direct_product([cyc(3), sym(3)])
    facs = chief_series(P)
    threes = [d for d in facs if d.order == 3]
    assert len(threes) == 2
    assert not g_isomorphic(P, threes[0], threes[1])


def test_g_connected_a5_squared():
    P, _, _ = direct_product([alt(5), alt(5)])
    facs = chief_series(P)
    assert len(facs) == 2
    assert g_connected(P, facs[0], facs[1]) is True
    cs = crowns(P)
    nonab = [c for c in cs if not c.abelian]
    assert len(nonab) == 1 and nonab[0].length == 2


def test_g_connected_different_simples():
    P, _, _ = direct_product([alt(5), builtin("psl:2,7")])
    facs = chief_series(P)
    assert len(facs) == 2
    assert g_connected(P, facs[0], facs[1]) is False


def test_crowns_s4():
    G = sym(4)
    cs = crowns(G)
    assert len(cs) == 3
    assert sorted(c.order for c in cs) == [2, 3, 4]
    assert all(c.length == 1 and c.abelian for c in cs)


def test_crowns_c3_squared():
    P, _, _ = direct_product([cyc(3), cyc(3)])
    cs = crowns(P)
    assert len(cs) == 1
    assert cs[0].order == 3 and cs[0].length == 2


def test_classify_maximal_s4():
    G = sym(4)
    for rec in maximal_subgroups(G):
        assert classify_maximal(G, rec.subgroup) == 1


def test_classify_maximal_a4_in_a5():
    G = alt(5)
    a4 = G.subgroup([parse_cycles("(1,2,3)", 5), parse_cycles("(1,2)(3,4)", 5)])
    assert classify_maximal(G, a4) == 2


def test_classify_maximal_type3():
    # diagonal A5 inside A5 x A5 is maximal with trivial core: type 3
    P, emb, _ = direct_product([alt(5), alt(5)])
    diag_gens = [emb[0].apply(g) * emb[1].apply(g) for g in alt(5).generators]
    D = P.subgroup(diag_gens)
    assert D.order == 60
    assert core(P, D).order == 1
    assert classify_maximal(P, D) == 3


def test_baer_types_match_lattice_route():
    for make in (lambda: sym(4), lambda: alt(5), lambda: builtin("sl:2,3"),
                 lambda: builtin("agl:1,8")):
        G = make()
        for rec in maximal_subgroups(G):
            assert rec.baer_type == classify_maximal(G, rec.subgroup)


def test_associated_primitive_v4():
    G = sym(4)
    d = chief_series(G)[0]
    P = associated_primitive(G, d)
    assert P.degree == 4
    assert P.order == 24  # |A| * |G/C| = 4 * 6


def test_associated_primitive_simple():
    G = alt(5)
    d = chief_series(G)[0]
    P = associated_primitive(G, d)
    assert P.order == 60


def test_chief_series_agl32():
    G = builtin("agl:3,2")
    facs = chief_series(G)
    assert [d.order for d in facs] == [8, 168]
    assert facs[0].abelian and not facs[1].abelian
    assert facs[1].simple_id == "PSL(2,7)"
    for d in facs:
        ensure_factor_flags(G, d)
    assert facs[0].complemented is True
    assert facs[1].frattini is False

import itertools

import pytest

from perilink.catalog import catalog_group, corpus_presentation
from perilink.diagram import parse_pd
from perilink.groups import GroupPresentation, cyclic_group, evaluate_word
from perilink.homenum import (
    SearchLimitExceeded,
    enumerate_homs,
    is_meridional,
    peripheral_system,
)
from perilink.wirtinger import presentation
from perilink.words import Word

TREFOIL = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"
HOPF = "X[1,3,2,4] X[3,1,4,2]"


def trefoil_two_generator_count(G):
    """Independent oracle: exhaustive check of x y x = y x y over G^2."""
    count = surj = 0
    for x, y in itertools.product(range(G.order), repeat=2):
        lhs = G.mul(G.mul(x, y), x)
        rhs = G.mul(G.mul(y, x), y)
        if lhs == rhs:
            count += 1
            if len(G.subgroup_closure([x, y])) == G.order:
                surj += 1
    return count, surj


def test_unknot_enumeration():
    d = parse_pd("U")
    for name in ("Z2", "S3", "Q8"):
        G = catalog_group(name)
        homs = enumerate_homs(presentation(d), G)
        assert len(homs) == G.order


def test_trefoil_s3_counts_match_oracle():
    G = catalog_group("S3")
    expect_total, expect_surj = trefoil_two_generator_count(G)
    assert (expect_total, expect_surj) == (12, 6)
    homs = enumerate_homs(presentation(parse_pd(TREFOIL)), G)
    assert len(homs) == expect_total
    assert sum(h.surjective for h in homs) == expect_surj


def test_trefoil_counts_match_oracle_other_groups():
    for name in ("Z6", "A4", "D4"):
        G = catalog_group(name)
        expect = trefoil_two_generator_count(G)
        homs = enumerate_homs(presentation(parse_pd(TREFOIL)), G)
        got = (len(homs), sum(h.surjective for h in homs))
        assert got == expect


def test_trefoil_z3_surjective():
    G = cyclic_group(3)
    homs = enumerate_homs(presentation(parse_pd(TREFOIL)), G,
                          surjective_only=True)
    assert len(homs) == 2
    for h in homs:
        assert len(set(h.assignment)) == 1  # all arcs share one label


def test_hopf_forces_commuting_pairs():
    G = catalog_group("S3")
    homs = enumerate_homs(presentation(parse_pd(HOPF)), G)
    assert len(homs) == sum(1 for a, b in itertools.product(range(6), repeat=2)
                            if G.commutes(a, b))


def test_every_relator_holds_post_hoc():
    d = parse_pd(TREFOIL)
    p = presentation(d)
    G = catalog_group("A4")
    for h in enumerate_homs(p, G):
        for w in p.relations:
            assert evaluate_word(G, h.assignment, w) == 0


def test_enumeration_deterministic_and_thread_independent():
    d = parse_pd("X[4,2,5,1] X[8,6,1,5] X[2,7,3,8] X[6,3,7,4]")  # figure eight
    G = catalog_group("S3")
    base = [h.assignment for h in enumerate_homs(presentation(d), G)]
    assert base == sorted(base)
    for threads in (2, 4):
        again = [h.assignment
                 for h in enumerate_homs(presentation(d), G, threads=threads)]
        assert again == base


def test_meridian_constraints():
    d = parse_pd(HOPF)
    G = cyclic_group(6)
    p = presentation(d)
    pinned = enumerate_homs(p, G, meridian_constraints=[2, None])
    assert all(h.assignment[p.meridian_generator[0]] == 2 for h in pinned)
    assert len(pinned) == 6
    cls = enumerate_homs(p, G, meridian_constraints=[("class", 2), None])
    assert len(cls) == 6  # abelian group: class of 2 is {2}


def test_limit_exceeded():
    d = parse_pd(TREFOIL)
    with pytest.raises(SearchLimitExceeded):
        enumerate_homs(presentation(d), catalog_group("S4"), limit=10)


def test_generic_presentation_enumeration():
    # x y x = y x y as an abstract 2-generator presentation
    rel = Word.from_pairs([[1, 1], [2, 1], [1, 1], [2, -1], [1, -1], [2, -1]])
    pres = GroupPresentation(generators=2, relators=(rel,))
    G = catalog_group("S3")
    homs = enumerate_homs(pres, G)
    assert len(homs) == 12
    assert sum(h.surjective for h in homs) == 6


def test_corpus_presentations_enumerate():
    for name in ("virtual_knot_2gen", "normally_generated_4gen_n2"):
        pres = corpus_presentation(name)
        homs = enumerate_homs(pres, catalog_group("S3"))
        assert len(homs) >= 1  # the trivial homomorphism at minimum
        for h in homs:
            for w in pres.relators:
                assert evaluate_word(catalog_group("S3"), h.assignment, w) == 0


def test_peripheral_system_unknot():
    d = parse_pd("U")
    G = catalog_group("S3")
    for h in enumerate_homs(presentation(d), G):
        ps = peripheral_system(d, h)
        assert ps.mu == (h.assignment[0],)
        assert ps.lam == (0,)
        assert ps.lam_bar == (0,)


def test_peripheral_trefoil_s3_longitude_in_commutators():
    d = parse_pd(TREFOIL)
    G = catalog_group("S3")
    comm = {0, G.element_names.index("(1 2 3)"),
            G.element_names.index("(1 3 2)")}
    for h in enumerate_homs(presentation(d), G, surjective_only=True):
        ps = peripheral_system(d, h)
        assert ps.lam[0] in comm
        assert ps.lam_bar[0] in comm


def test_peripheral_commutation_sweep():
    for text in (TREFOIL, HOPF):
        d = parse_pd(text)
        for name in ("S3", "A4", "Z6", "Dic3"):
            G = catalog_group(name)
            for h in enumerate_homs(presentation(d), G):
                ps = peripheral_system(d, h)
                for i in range(d.num_components):
                    assert G.commutes(ps.mu[i], ps.lam[i])
                    assert G.commutes(ps.mu[i], ps.lam_bar[i])


def test_is_meridional():
    G = catalog_group("S3")
    t = G.element_names.index("(1 2)")
    c = G.element_names.index("(1 2 3)")
    assert is_meridional(G, [t])
    assert not is_meridional(G, [c])
    assert is_meridional(G, [c, t])
    z5 = cyclic_group(5)
    assert is_meridional(z5, [2])
    with pytest.raises(ValueError):
        is_meridional(G, [])


def test_conjugation_orbit_postfilter_consistency():
    # conjugating an entire assignment produces another valid assignment
    d = parse_pd(TREFOIL)
    G = catalog_group("S3")
    homs = {h.assignment for h in enumerate_homs(presentation(d), G)}
    for a in list(homs)[:6]:
        for g in range(G.order):
            conj = tuple(G.conjugate(g, v) for v in a)
            assert conj in homs


def test_conjugation_orbits_partition():
    from perilink.homenum import conjugation_orbits
    d = parse_pd(TREFOIL)
    G = catalog_group("S3")
    homs = enumerate_homs(presentation(d), G)
    orbits = conjugation_orbits(homs)
    assert sum(len(o) for o in orbits) == len(homs)
    # verdict-level data is constant along each orbit
    for orbit in orbits:
        keys = {(peripheral_system(d, h).mu and h.surjective) for h in orbit}
        surj = {h.surjective for h in orbit}
        assert len(surj) == 1
    assert conjugation_orbits([]) == []


def brute_force_count(d, G):
    """Independent oracle: try every assignment of arcs to elements."""
    p = presentation(d)
    count = surj = 0
    for assign in itertools.product(range(G.order), repeat=p.generators):
        if all(evaluate_word(G, assign, w) == 0 for w in p.relations):
            count += 1
            if len(G.subgroup_closure(list(assign))) == G.order:
                surj += 1
    return count, surj


def test_propagation_matches_brute_force():
    from perilink.catalog import corpus_diagram
    cases = [
        (parse_pd(TREFOIL), "Z4"),
        (parse_pd(TREFOIL), "S3"),
        (parse_pd(HOPF), "S3"),
        (corpus_diagram("figure_eight"), "Z5"),
        (corpus_diagram("figure_eight"), "S3"),
        (corpus_diagram("whitehead"), "Z3"),
    ]
    for d, gname in cases:
        G = catalog_group(gname)
        expect = brute_force_count(d, G)
        homs = enumerate_homs(presentation(d), G)
        got = (len(homs), sum(h.surjective for h in homs))
        assert got == expect, (gname, got, expect)

"""Property tests over generated diagrams (braid closures as the source)."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from perilink.catalog import braid_closure, catalog_group
from perilink.diagram import (
    canonical,
    linking_number,
    multi_connected_sum,
    parse_pd,
    reverse_orientations,
    self_writhe,
    to_text,
)
from perilink.homenum import enumerate_homs, peripheral_system
from perilink.wirtinger import presentation

braid_words = st.lists(
    st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=7).filter(
        lambda w: {abs(x) for x in w} in ({1}, {1, 2}))


def strands_for(word):
    return max(abs(x) for x in word) + 1


def all_components_pass_under(d):
    under_comps = {d.component_of_edge[x.under_in] for x in d.crossings}
    return all(i in under_comps or not comp
               for i, comp in enumerate(d.components))


@settings(max_examples=60, deadline=None)
@given(braid_words)
def test_roundtrip_on_braid_closures(word):
    d = braid_closure(word, strands_for(word))
    text = to_text(d)
    again = parse_pd(text)
    # text-level round-trip always holds; a component that never passes
    # under anything serializes ambiguously (the two mirror readings share
    # one PD text), so diagram-level identity is asserted only when every
    # component is anchored by an under-pass
    assert to_text(again) == text
    if all_components_pass_under(d):
        assert canonical(again) == canonical(d)


@settings(max_examples=60, deadline=None)
@given(braid_words)
def test_linking_symmetry_and_writhe_sum(word):
    d = braid_closure(word, strands_for(word))
    r = d.num_components
    total = sum(self_writhe(d, i) for i in range(r))
    total += sum(2 * linking_number(d, i, j)
                 for i in range(r) for j in range(i + 1, r))
    assert total == sum(1 if x > 0 else -1 for x in word)
    for i in range(r):
        for j in range(r):
            if i != j:
                assert linking_number(d, i, j) == linking_number(d, j, i)


@settings(max_examples=40, deadline=None)
@given(braid_words)
def test_reverse_involution_on_braid_closures(word):
    d = canonical(braid_closure(word, strands_for(word)))
    assert reverse_orientations(reverse_orientations(d)) == d
    rd = reverse_orientations(d)
    for i in range(d.num_components):
        assert self_writhe(rd, i) == self_writhe(d, i)


@settings(max_examples=25, deadline=None)
@given(braid_words, st.integers(0, 10 ** 6))
def test_sum_additivity_random_splice(word, seed):
    d = braid_closure(word, strands_for(word))
    rnd = random.Random(seed)
    splice = []
    for i in range(d.num_components):
        comp = d.components[i]
        splice.append((rnd.choice(comp), rnd.choice(comp)))
    s = multi_connected_sum(d, d, splice)
    assert s.num_components == d.num_components
    for i in range(d.num_components):
        assert self_writhe(s, i) == 2 * self_writhe(d, i)
        for j in range(d.num_components):
            if i != j:
                assert linking_number(s, i, j) == 2 * linking_number(d, i, j)


@settings(max_examples=15, deadline=None)
@given(braid_words)
def test_peripheral_commutation_on_braid_closures(word):
    d = braid_closure(word, strands_for(word))
    G = catalog_group("S3")
    for h in enumerate_homs(presentation(d), G):
        ps = peripheral_system(d, h)
        for i in range(d.num_components):
            assert G.commutes(ps.mu[i], ps.lam[i])
            assert G.commutes(ps.mu[i], ps.lam_bar[i])


def test_raised_cap_computes_s4_schur_multiplier():
    from perilink.homology import homology_group
    G = catalog_group("S4")
    h2 = homology_group(G, 2, cap_order=24)
    assert list(h2.invariant_factors) == [2]

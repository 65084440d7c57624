"""Acceptance suite: one test per exit criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import itertools
import random
import sys
import time

from helpers import random_ribbon_input

from perilink.catalog import (
    CATALOG_GROUP_NAMES,
    catalog_group,
    catalog_groups,
    corpus,
    corpus_presentation,
)
from perilink.cli import _sweep_cell
from perilink.diagram import linking_number, parse_pd
from perilink.groups import abelianization, cyclic_group, direct_product, evaluate_word
from perilink.homenum import enumerate_homs, is_meridional, peripheral_system
from perilink.homology import (
    GroupHomologyEngine,
    apply_boundary,
    chain_from_tuples,
    homology_group,
    jl_product,
    pontryagin,
    pontryagin_chain,
    push_forward,
    q_group,
)
from perilink.realize import (
    balanced_twist_families,
    check_full,
    construct_ribbon,
    quadratic_twist_family,
    reversed_realization,
    sum_realization,
    verify_realization,
)
from perilink.wirtinger import presentation


def _line(ok: bool, name: str, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] {name}" + (f" ({detail})" if detail else ""),
          file=sys.stderr)
    assert ok, name


def test_enumeration_counts():
    t0 = time.monotonic()
    G = catalog_group("S3")
    oracle_total = oracle_surj = 0
    for x, y in itertools.product(range(6), repeat=2):
        if G.mul(G.mul(x, y), x) == G.mul(G.mul(y, x), y):
            oracle_total += 1
            if len(G.subgroup_closure([x, y])) == 6:
                oracle_surj += 1
    assert (oracle_total, oracle_surj) == (12, 6)
    d = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    homs = enumerate_homs(presentation(d), G)
    trefoil_time = time.monotonic() - t0
    ok = len(homs) == 12 and sum(h.surjective for h in homs) == 6
    unknot = parse_pd("U")
    for name in CATALOG_GROUP_NAMES:
        Gk = catalog_group(name)
        t1 = time.monotonic()
        count = len(enumerate_homs(presentation(unknot), Gk))
        ok = ok and count == Gk.order and (time.monotonic() - t1) < 1.0
    ok = ok and trefoil_time < 1.0
    _line(ok, "enumeration counts (trefoil->S3 = 12/6; unknot->G = |G|)",
          f"{time.monotonic() - t0:.2f}s")


def test_homology_closed_forms():
    t0 = time.monotonic()
    ok = True
    for n in range(2, 13):
        g = cyclic_group(n)
        ok = ok and list(homology_group(g, 2).invariant_factors) == []
        ok = ok and list(homology_group(g, 3).invariant_factors) == [n]
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    ok = ok and list(homology_group(v4, 2).invariant_factors) == [2]
    took = time.monotonic() - t0
    ok = ok and took < 60.0
    _line(ok, "homology closed forms (H2/H3 cyclic <= 12, Kunneth V4)",
          f"{took:.1f}s")


def test_necessity_sweep():
    t0 = time.monotonic()
    failures = 0
    cap_skipped = 0
    surjections = 0
    weak_checked = full_checked = 0
    for name, d in corpus():
        for G in catalog_groups():
            cell = _sweep_cell(d, name, G, cap_order=16, limit=10 ** 6,
                               threads=1)
            failures += len(cell["failures"])
            cap_skipped += cell["cap_skipped"]
            surjections += cell["surjections"]
            weak_checked += cell["weak_checked"]
            full_checked += cell["full_checked"]
    took = time.monotonic() - t0
    ok = failures == 0 and took < 300.0 and surjections > 1000
    _line(ok, "necessity sweep over corpus x catalog",
          f"{surjections} surjections, {weak_checked} weak, "
          f"{full_checked} full, {cap_skipped} cap-skipped, {took:.1f}s")


def test_pontryagin_properties():
    t0 = time.monotonic()
    rnd = random.Random(20240810)
    groups = [catalog_group(n) for n in ("S3", "D4", "D5", "A4", "Q8",
                                         "Dic3", "Z8", "Z12")]
    groups.append(direct_product(cyclic_group(2), cyclic_group(2)))
    groups.append(direct_product(cyclic_group(2), cyclic_group(4)))
    checked = 0
    ok = True
    while checked < 1000:
        G = rnd.choice(groups)
        a = rnd.randrange(G.order)
        cz = G.centralizer(a)
        b, c = rnd.choice(cz), rnd.choice(cz)
        p_ab = pontryagin(G, a, b)
        ok = ok and (p_ab + pontryagin(G, b, a)).is_zero
        ok = ok and pontryagin(G, a, G.mul(b, c)) == \
            p_ab + pontryagin(G, a, c)
        ok = ok and pontryagin(G, a, G.power(a, rnd.randrange(8))).is_zero
        checked += 1
        if not ok:
            break
    _line(ok, "pontryagin antisymmetry/additivity/powers",
          f"{checked} random commuting pairs+triples, "
          f"{time.monotonic() - t0:.1f}s")


def _conjugate_meridional_systems(G, r, rnd, count):
    """Random pairwise-conjugate meridional systems of length r."""
    out = []
    candidates = [a for a in range(1, G.order)
                  if is_meridional(G, [a])]
    if not candidates:
        return out
    for _ in range(count):
        a = rnd.choice(candidates)
        cls = sorted(G.conjugacy_class(a))
        out.append([a] + [rnd.choice(cls) for _ in range(r - 1)])
    return out


def test_jl_product_properties():
    t0 = time.monotonic()
    rnd = random.Random(77)
    ok = True
    instances = 0
    for name in ("Z4", "Z6", "S3", "D5", "A4", "Dic3"):
        G = catalog_group(name)
        ab = abelianization(G)
        for r in (1, 2, 3):
            for mu in _conjugate_meridional_systems(G, r, rnd, 3):
                # identity system: the product is defined and zero
                zero = jl_product(G, mu, [0] * r)
                ok = ok and zero.is_zero
                # additivity over valid lambda/tau (commuting with mu,
                # inside the commutator subgroup, primary sum zero)
                pools = []
                for m in mu:
                    pool = [l for l in G.centralizer(m)
                            if l in ab.commutator_subgroup]
                    pools.append(pool)
                for _ in range(3):
                    lam = [rnd.choice(p) for p in pools]
                    tau = [rnd.choice(p) for p in pools]
                    from perilink.homology import pontryagin_sum
                    if not pontryagin_sum(G, mu, lam).is_zero:
                        continue
                    if not pontryagin_sum(G, mu, tau).is_zero:
                        continue
                    prod = [G.mul(a, b) for a, b in zip(lam, tau)]
                    lhs = jl_product(G, mu, lam) + jl_product(G, mu, tau)
                    ok = ok and lhs == jl_product(G, mu, prod)
                    instances += 1
                # drop-component equality when the last lambda is identity
                if r >= 2:
                    lam = [rnd.choice(p) for p in pools[:-1]] + [0]
                    from perilink.homology import pontryagin_sum
                    if pontryagin_sum(G, mu, lam).is_zero and \
                            is_meridional(G, mu[:-1]):
                        full = jl_product(G, mu, lam)
                        dropped = jl_product(G, mu[:-1], lam[:-1])
                        ok = ok and full.coords == dropped.coords
                        instances += 1
                # well-definedness: independent fillings agree in the quotient
                vals = {jl_product(G, mu, [0] * r, solution_seed=s).coords
                        for s in (0, 1)}
                ok = ok and len(vals) == 1
    # independent nontrivial filling check: difference of two fillings of a
    # nonzero cycle pushes into the image submodule
    G = catalog_group("S3")
    a = G.element_names.index("(1 2 3)")
    b = G.element_names.index("(1 3 2)")
    z = chain_from_tuples(G, pontryagin_chain(G, a, b))
    engine = GroupHomologyEngine(G)
    w0 = engine.elimination(3, solver=True, seed=0).solve(z)
    w1 = engine.elimination(3, solver=True, seed=7).solve(z)
    diff = dict(w0)
    for k, v in w1.items():
        nv = diff.get(k, 0) - v
        if nv:
            diff[k] = nv
        else:
            diff.pop(k, None)
    ok = ok and apply_boundary(G, 3, diff) == {}
    q = q_group(G)
    pushed = push_forward(G, q.cyclic, abelianization(G).pr, diff, degree=3)
    ok = ok and q.contains_in_image(q.ambient.classify(pushed))
    _line(ok, "secondary product: identity, additivity, drop-component, "
          "well-definedness", f"{instances} instances, "
          f"{time.monotonic() - t0:.1f}s")


def test_known_realizable_families():
    t0 = time.monotonic()
    rnd = random.Random(5)
    ok = True
    tried = 0
    for name in CATALOG_GROUP_NAMES:
        G = catalog_group(name)
        if G.order > 16:
            continue
        ab = abelianization(G)
        if not ab.is_cyclic:
            continue
        n = ab.quotient_order
        systems = _conjugate_meridional_systems(G, 2, rnd, 2)
        for mu in systems:
            for b in range(-3, 4):
                for c in range(-3, 4):
                    if (b + c) % n:
                        continue
                    lam = quadratic_twist_family(G, mu, b, c)
                    v = check_full(G, mu, lam)
                    ok = ok and v.realizable is True
                    tried += 1
            for h in range(-3, 4):
                for lam in balanced_twist_families(G, mu, h):
                    v = check_full(G, mu, lam)
                    ok = ok and v.realizable is True
                    tried += 1
    _line(ok and tried > 100, "known-realizable twist families",
          f"{tried} systems, {time.monotonic() - t0:.1f}s")


def test_ribbon_roundtrip():
    t0 = time.monotonic()
    rnd = random.Random(99)
    built = 0
    ok = True
    for name in ("Z4", "S3", "D4", "A4"):
        G = catalog_group(name)
        for r in (1, 2, 3):
            inp = random_ribbon_input(G, r, rnd)
            if inp is None:
                continue
            rr = construct_ribbon(inp)
            ok = ok and rr.diagram.num_components == r
            ok = ok and rr.hom.surjective
            p = presentation(rr.diagram)
            for w in p.relations:
                ok = ok and evaluate_word(G, rr.hom.assignment, w) == 0
            for i in range(r):
                ok = ok and rr.hom.assignment[p.meridian_generator[i]] == \
                    rr.mu[i]
                for j in range(i + 1, r):
                    ok = ok and linking_number(rr.diagram, i, j) == 0
            built += 1
    took = time.monotonic() - t0
    ok = ok and built >= 10 and took < 60.0
    _line(ok, "ribbon round-trip", f"{built} constructions, {took:.1f}s")


def test_sum_structure():
    t0 = time.monotonic()
    ok = True
    # componentwise product on a Hopf-derived example
    G6 = cyclic_group(6)
    hopf = parse_pd("X[1,3,2,4] X[3,1,4,2]")
    homs = enumerate_homs(presentation(hopf), G6, surjective_only=True)
    same = [h for h in homs if peripheral_system(hopf, h).mu == (1, 1)]
    h1, h2 = same[0], same[-1]
    ps1 = peripheral_system(hopf, h1)
    ps2 = peripheral_system(hopf, h2)
    s, merged = sum_realization(hopf, hopf, G6, h1, h2)
    lam = [G6.mul(a, b) for a, b in zip(ps1.lam, ps2.lam)]
    ok = ok and verify_realization(s, G6, merged, list(ps1.mu), lam)
    # and on the trefoil into S3
    G = catalog_group("S3")
    tre = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]")
    surj = enumerate_homs(presentation(tre), G, surjective_only=True)
    pairs = 0
    for ha in surj:
        for hb in surj:
            pa = peripheral_system(tre, ha)
            pb = peripheral_system(tre, hb)
            if pa.mu != pb.mu:
                continue
            s2, m2 = sum_realization(tre, tre, G, ha, hb)
            lam2 = [G.mul(a, b) for a, b in zip(pa.lam, pb.lam)]
            ok = ok and verify_realization(s2, G, m2, list(pa.mu), lam2)
            pairs += 1
    # inverses by orientation reversal
    for h in surj:
        ps = peripheral_system(tre, h)
        rd, rh = reversed_realization(tre, G, h)
        ok = ok and verify_realization(
            rd, G, rh, [G.inverse[m] for m in ps.mu],
            [G.inverse[l] for l in ps.lam])
    _line(ok, "sum structure: products and inverses",
          f"{pairs} sums, {time.monotonic() - t0:.1f}s")


def test_presentation_corpus_enumerates():
    t0 = time.monotonic()
    ok = True
    for pname in ("virtual_knot_2gen", "normally_generated_4gen_n2",
                  "normally_generated_4gen_n3", "normally_generated_4gen_n4"):
        pres = corpus_presentation(pname)
        for gname in ("Z2", "Z3", "Z4", "S3"):
            G = catalog_group(gname)
            homs = enumerate_homs(pres, G)
            ok = ok and len(homs) >= 1
            for h in homs:
                for w in pres.relators:
                    ok = ok and evaluate_word(G, h.assignment, w) == 0
    _line(ok, "presentation corpus enumerates without error",
          f"{time.monotonic() - t0:.1f}s")

"""Wirtinger presentations and longitude words from oriented diagrams.

Generators are the diagram arcs (maximal edge runs not interrupted by an
under-pass) plus one generator per crossingless component.  At a crossing of
sign e with over-arc o, incoming under-arc u and outgoing under-arc v, the
relation is v * (o^e * u * o^-e)^-1.

Longitude words are read by walking a component from its basepoint edge and
recording (over-arc, crossing sign) at every under-pass.  The three flavors:

* longitude_raw: the bare reading; abelianized it equals
  self_writhe * [m_i] + sum_j lk(i,j) * [m_j].
* preferred_longitude: m_i^(-writhe) * raw; null-homologous coefficient on
  its own meridian.
* preferred_system: m_i^(-sum of linking numbers) * preferred_longitude;
  the componentwise rows satisfy the linking-matrix condition with zero row
  sums, and the rows sum to zero overall.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import LinkDiagram, linking_number, self_writhe
from .snf import sparse_elimination
from .words import Word


@dataclass(frozen=True)
class WirtingerPresentation:
    generators: int
    arcs: tuple[tuple[int, ...], ...]          # edge runs; empty for crossingless
    relations: tuple[Word, ...]
    meridian_generator: tuple[int, ...]        # component index -> generator
    component_of: tuple[int, ...]              # generator -> component index
    arc_of_edge: dict

    def to_json(self) -> dict:
        return {
            "generators": [f"x{k}" for k in range(self.generators)],
            "relations": [w.to_signed_ints() for w in self.relations],
            "meridians": list(self.meridian_generator),
            "component_of": list(self.component_of),
            "arcs": [list(a) for a in self.arcs],
        }


def _arcs_of(d: LinkDiagram) -> tuple[list[tuple[int, ...]], dict]:
    """Arcs as maximal runs of edges; an arc breaks where its component goes
    under.  A component that never goes under is one closed arc."""
    under_in_edges = {x.under_in for x in d.crossings}
    arcs: list[tuple[int, ...]] = []
    arc_of_edge: dict[int, int] = {}
    for comp in d.components:
        if not comp:
            continue
        k = len(comp)
        breaks = [i for i in range(k) if comp[i] in under_in_edges]
        if not breaks:
            idx = len(arcs)
            arcs.append(tuple(comp))
            for e in comp:
                arc_of_edge[e] = idx
            continue
        for bi, start_break in enumerate(breaks):
            # run starts after the under-pass that terminates comp[start_break]
            start = (start_break + 1) % k
            end_break = breaks[(bi + 1) % len(breaks)]
            run = []
            i = start
            while True:
                run.append(comp[i])
                if i == end_break:
                    break
                i = (i + 1) % k
            idx = len(arcs)
            arcs.append(tuple(run))
            for e in run:
                arc_of_edge[e] = idx
    return arcs, arc_of_edge


def presentation(d: LinkDiagram) -> WirtingerPresentation:
    cached = getattr(d, "_wirtinger", None)
    if cached is not None:
        return cached
    arcs, arc_of_edge = _arcs_of(d)
    component_of = [d.component_of_edge[a[0]] for a in arcs]
    # crossingless components contribute a bare generator
    meridian_generator: list[int] = []
    gen_count = len(arcs)
    all_arcs = list(arcs)
    for ci, comp in enumerate(d.components):
        if comp:
            meridian_generator.append(arc_of_edge[comp[0]])
        else:
            meridian_generator.append(gen_count)
            all_arcs.append(())
            component_of.append(ci)
            gen_count += 1

    relations = []
    for x in d.crossings:
        o = arc_of_edge[x.over_in]
        u = arc_of_edge[x.under_in]
        v = arc_of_edge[x.under_out]
        conj = (Word.generator(o, x.sign)
                * Word.generator(u)
                * Word.generator(o, -x.sign))
        relations.append(Word.generator(v) * conj.inverse())

    pres = WirtingerPresentation(
        generators=gen_count,
        arcs=tuple(all_arcs),
        relations=tuple(relations),
        meridian_generator=tuple(meridian_generator),
        component_of=tuple(component_of),
        arc_of_edge=arc_of_edge,
    )
    _check_abelianization_rank(pres, d.num_components)
    d._wirtinger = pres  # type: ignore[attr-defined]
    return pres


def _check_abelianization_rank(p: WirtingerPresentation, r: int):
    """The abelianized link group must be free of rank r."""
    if not p.relations:
        if p.generators != r:
            raise AssertionError("generator count mismatch on relation-free input")
        return
    cols: dict[int, dict[int, int]] = {}
    for j, w in enumerate(p.relations):
        vec = w.abelianized(p.generators)
        col = {i: v for i, v in enumerate(vec) if v}
        if col:
            cols[j] = col
    elim = sparse_elimination(p.generators, len(p.relations),
                              {j: c for j, c in cols.items()},
                              record_row_ops=False)
    if any(abs(piv.value) != 1 for piv in elim.pivots):
        raise AssertionError("abelianization has torsion")
    if p.generators - elim.rank != r:
        raise AssertionError(
            f"abelianization rank {p.generators - elim.rank} != components {r}")


def longitude_raw(d: LinkDiagram, i: int) -> Word:
    """Walk component i from its basepoint edge; record each under-pass.

    Under the left-to-right product convention the letters compose with the
    first under-pass acting last; this is the reading for which the meridian
    and longitude images commute under every labelling (checked against
    exhaustive enumerations in the tests).
    """
    if not (0 <= i < d.num_components):
        raise IndexError(f"component index {i} out of range")
    comp = d.components[i]
    if not comp:
        return Word.identity()
    p = presentation(d)
    under_at: dict[int, "object"] = {x.under_in: x for x in d.crossings}
    letters = []
    for e in comp:
        x = under_at.get(e)
        if x is not None:
            letters.append((p.arc_of_edge[x.over_in], x.sign))
    return Word(tuple(reversed(letters)))


def preferred_longitude(d: LinkDiagram, i: int) -> Word:
    """m_i^(-w) * raw, with w the self-writhe of component i."""
    w = self_writhe(d, i)
    p = presentation(d)
    m = p.meridian_generator[i]
    return Word.generator(m, -w) * longitude_raw(d, i)


def preferred_system(d: LinkDiagram) -> tuple[Word, ...]:
    """Longitude words whose abelianizations form the linking matrix with
    zero row sums."""
    out = []
    p = presentation(d)
    for i in range(d.num_components):
        alpha_ii = -sum(linking_number(d, i, j)
                        for j in range(d.num_components) if j != i)
        m = p.meridian_generator[i]
        out.append(Word.generator(m, alpha_ii) * preferred_longitude(d, i))
    return tuple(out)

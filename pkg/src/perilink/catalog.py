"""Shipped group catalog and diagram corpus.

Corpus diagrams live as JSON files under data/corpus; the presentation
corpus (finitely presented groups used for enumeration only) under
data/presentations.  Groups are built on demand and cached per process.
"""

from __future__ import annotations

import json
from importlib import resources

from .diagram import Crossing, LinkDiagram, canonical, parse_pd
from .groups import (
    FiniteGroup,
    GroupPresentation,
    alternating_group,
    cyclic_group,
    dicyclic_group,
    dihedral_group,
    symmetric_group,
)

def _quaternion_group():
    g = dicyclic_group(2)
    g.name = "Q8"
    return g


_GROUP_BUILDERS = {
    **{f"Z{n}": (lambda n=n: cyclic_group(n)) for n in range(1, 13)},
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
    "A4": lambda: alternating_group(4),
    "D4": lambda: dihedral_group(4),
    "D5": lambda: dihedral_group(5),
    "Q8": _quaternion_group,
    "Dic3": lambda: dicyclic_group(3),
}

CATALOG_GROUP_NAMES = tuple(_GROUP_BUILDERS.keys())

_group_cache: dict[str, FiniteGroup] = {}


def catalog_group(name: str) -> FiniteGroup:
    if name not in _GROUP_BUILDERS:
        raise KeyError(f"unknown catalog group {name!r}; "
                       f"known: {', '.join(CATALOG_GROUP_NAMES)}")
    if name not in _group_cache:
        _group_cache[name] = _GROUP_BUILDERS[name]()
    return _group_cache[name]


def catalog_groups(max_order: int | None = None) -> list[FiniteGroup]:
    out = [catalog_group(n) for n in CATALOG_GROUP_NAMES]
    if max_order is not None:
        out = [g for g in out if g.order <= max_order]
    return out


# ---------------------------------------------------------------------------
# braid closures (internal helper used to generate the shipped corpus)
# ---------------------------------------------------------------------------


def braid_closure(word: list[int], strands: int) -> LinkDiagram:
    """Closure of a braid word; generator i crosses strands i, i+1 with the
    lower-index strand passing over (sign +1), negative letters inverted.

    Strands run upward.  The diagram is assembled directly (not reparsed):
    the braid fixes every over-strand direction, including configurations
    whose PD text alone would be ambiguous.
    """
    if not word:
        raise ValueError("empty braid word")
    if any(abs(v) < 1 or abs(v) >= strands for v in word):
        raise ValueError("braid letter out of range")
    nxt = strands + 1
    current = list(range(1, strands + 1))
    initial = list(current)
    crossings = []   # (under_in, over_a, under_out, over_b, sign)
    succ: dict[int, int] = {}
    for letter in word:
        i = abs(letter) - 1
        lo, hi = current[i], current[i + 1]
        f_lo, f_hi = nxt, nxt + 1
        nxt += 2
        if letter > 0:
            # under: hi -> f_lo (lower-right to upper-left); over: lo -> f_hi
            crossings.append((hi, f_hi, f_lo, lo, 1))
        else:
            crossings.append((lo, hi, f_hi, f_lo, -1))
        succ[lo] = f_hi
        succ[hi] = f_lo
        current[i], current[i + 1] = f_lo, f_hi
    # closure: identify each strand's final edge with its initial edge;
    # strands never crossed close up into split unknot components
    rename = {}
    unknots = 0
    for pos in range(strands):
        if current[pos] == initial[pos]:
            unknots += 1
        else:
            rename[current[pos]] = initial[pos]

    def res(e):
        return rename.get(e, e)

    built = [Crossing(res(a), res(b), res(c), res(d), s)
             for a, b, c, d, s in crossings]
    closed_succ = {}
    for e, f in succ.items():
        closed_succ[res(e)] = res(f)
    remaining = set(closed_succ)
    comps = []
    while remaining:
        start = min(remaining)
        cyc = [start]
        remaining.discard(start)
        e = closed_succ[start]
        while e != start:
            cyc.append(e)
            remaining.discard(e)
            e = closed_succ[e]
        comps.append(tuple(cyc))
    comps.sort(key=lambda c: c[0])
    comps.extend([()] * unknots)
    return canonical(LinkDiagram(built, comps))


# ---------------------------------------------------------------------------
# diagram corpus
# ---------------------------------------------------------------------------

CORPUS_NAMES = ("unknot", "hopf_positive", "hopf_negative", "trefoil",
                "figure_eight", "whitehead", "borromean")


def _corpus_dir():
    return resources.files("perilink").joinpath("data", "corpus")


def corpus_diagram(name: str) -> LinkDiagram:
    path = _corpus_dir().joinpath(f"{name}.json")
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError:
        raise KeyError(f"unknown corpus diagram {name!r}") from None
    return parse_pd(obj["pd"])


def corpus() -> list[tuple[str, LinkDiagram]]:
    return [(n, corpus_diagram(n)) for n in CORPUS_NAMES]


def load_diagram_json(obj: dict) -> LinkDiagram:
    """The corpus wrapper format: {"name": ..., "pd": ...}."""
    return parse_pd(obj["pd"])


# ---------------------------------------------------------------------------
# presentation corpus
# ---------------------------------------------------------------------------

PRESENTATION_NAMES = ("virtual_knot_2gen", "normally_generated_4gen_n2",
                      "normally_generated_4gen_n3", "normally_generated_4gen_n4")


def corpus_presentation(name: str) -> GroupPresentation:
    path = resources.files("perilink").joinpath("data", "presentations",
                                                f"{name}.json")
    try:
        obj = json.loads(path.read_text())
    except FileNotFoundError:
        raise KeyError(f"unknown corpus presentation {name!r}") from None
    return GroupPresentation.from_json(obj)

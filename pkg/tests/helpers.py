"""Shared test utilities: random ribbon inputs via conjugator word search."""

from collections import deque

from perilink.realize import RibbonInput


def find_conjugator_word(G, alphabet, base, target, max_len=4):
    """BFS for a word over the alphabet conjugating base to target.

    alphabet: list of ((s, t, exp), element) letters.  Returns the letter
    list or None.
    """
    if G.conjugate(0, base) == target:
        return []
    seen = {0}
    queue = deque([(0, [])])
    while queue:
        w, letters = queue.popleft()
        if len(letters) >= max_len:
            continue
        for (ref, val) in alphabet:
            for exp, v in ((1, val), (-1, G.inverse[val])):
                nw = G.mul(w, v)
                nl = letters + [(ref[0], ref[1], exp)]
                if G.conjugate(nw, base) == target:
                    return nl
                if nw not in seen:
                    seen.add(nw)
                    queue.append((nw, nl))
    return None


def random_ribbon_input(G, r, rnd, max_extra=2, tries=200):
    """A valid RibbonInput whose entries generate G, or None."""
    for _ in range(tries):
        counts = [rnd.randint(1, max_extra + 1) for _ in range(r)]
        mu = []
        for i in range(r):
            base = rnd.randrange(1, G.order)
            cls = sorted(G.conjugacy_class(base))
            row = [base] + [rnd.choice(cls) for _ in range(counts[i] - 1)]
            mu.append(row)
        flat = [v for row in mu for v in row]
        if len(G.subgroup_closure(flat)) != G.order:
            continue
        alphabet = [((s, t), mu[s][t])
                    for s in range(r) for t in range(len(mu[s]))]
        words = {}
        ok = True
        for i in range(r):
            for j in range(1, len(mu[i])):
                w = find_conjugator_word(G, alphabet, mu[i][0], mu[i][j])
                if w is None:
                    ok = False
                    break
                words[(i, j)] = w
            if not ok:
                break
        if not ok:
            continue
        inp = RibbonInput(group=G,
                          mu=tuple(tuple(row) for row in mu),
                          words=words)
        inp.validate()
        return inp
    return None

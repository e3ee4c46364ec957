"""Brute-force reference implementations. They share no code with the package."""

import itertools

ZERO, EXEC, ONE = "0", "exec", "1"


def closure(pairs):
    rel = set(pairs)
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return frozenset(rel)
        rel |= extra


def is_strict(rel):
    return all(a != b for a, b in rel) and all((b, a) not in rel for a, b in rel)


def strict_orders(n, natural=False):
    """Every strict partial order on range(n); with ``natural`` only those inside the < of ints."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j and (not natural or i < j)]
    out = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if closure(rel) == rel and is_strict(rel):
            out.append(frozenset(rel))
    return out


def orientations(n, prec):
    """Event orders making prec total: one direction per incomparable pair, acyclic."""
    inc = [(i, j) for i in range(n) for j in range(i + 1, n)
           if (i, j) not in prec and (j, i) not in prec]
    out = []
    for bits in itertools.product((0, 1), repeat=len(inc)):
        chosen = {(i, j) if b else (j, i) for (i, j), b in zip(inc, bits)}
        c = closure(chosen)
        if is_strict(c):
            out.append(c)
    return out


def has_two_plus_two(n, prec):
    for x, z, y, w in itertools.permutations(range(n), 4):
        if (x, z) in prec and (y, w) in prec and (x, w) not in prec and (y, z) not in prec:
            return True
    return False


def minimal(n, prec):
    return [i for i in range(n) if not any((j, i) in prec for j in range(n))]


def maximal(n, prec):
    return [i for i in range(n) if not any((i, j) in prec for j in range(n))]


def powerset(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def raw_structures(n, labels, interfaces=True, natural=False):
    """(events, label, prec, order, S, T) over string ids for every combination."""
    ids = [f"e{i}" for i in range(n)]
    for prec in strict_orders(n, natural):
        for order in orientations(n, prec):
            for labs in itertools.product(labels, repeat=n):
                srcs = powerset(minimal(n, prec)) if interfaces else [()]
                for s in list(srcs):
                    tgts = powerset(maximal(n, prec)) if interfaces else [()]
                    for t in tgts:
                        yield (ids, {ids[i]: labs[i] for i in range(n)},
                               {(ids[a], ids[b]) for a, b in prec},
                               {(ids[a], ids[b]) for a, b in order},
                               {ids[i] for i in s}, {ids[i] for i in t}, prec)


def brute_iso(p, q):
    """Search all bijections; returns one or None."""
    if len(p.events) != len(q.events):
        return None
    for perm in itertools.permutations(q.events):
        f = dict(zip(p.events, perm))
        if all(p.label[e] == q.label[f[e]] for e in p.events) \
                and {(f[a], f[b]) for a, b in p.prec} == set(q.prec) \
                and {(f[a], f[b]) for a, b in p.order} == set(q.order) \
                and {f[e] for e in p.sources} == set(q.sources) \
                and {f[e] for e in p.targets} == set(q.targets):
            return f
    return None


def brute_iso_essential(p, q):
    """Isomorphism that only has to respect event order between incomparable events."""
    def ess(r):
        return {(a, b) for a, b in r.order if (a, b) not in r.prec and (b, a) not in r.prec}
    if len(p.events) != len(q.events):
        return None
    for perm in itertools.permutations(q.events):
        f = dict(zip(p.events, perm))
        if all(p.label[e] == q.label[f[e]] for e in p.events) \
                and {(f[a], f[b]) for a, b in p.prec} == set(q.prec) \
                and {(f[a], f[b]) for a, b in ess(p)} == ess(q) \
                and {f[e] for e in p.sources} == set(q.sources) \
                and {f[e] for e in p.targets} == set(q.targets):
            return f
    return None


def brute_states(p):
    """State functions of the track object: if x < y and y has started then x is done."""
    events = list(p.events)
    out = []
    for vals in itertools.product((ZERO, EXEC, ONE), repeat=len(events)):
        st = dict(zip(events, vals))
        if all(st[y] == ZERO or st[x] == ONE for x, y in p.prec):
            out.append(st)
    return out


def brute_cell_counts(p):
    counts = {}
    for st in brute_states(p):
        d = sum(v == EXEC for v in st.values())
        counts[d] = counts.get(d, 0) + 1
    return counts


def all_maps(source, target):
    """Every label- and face-preserving assignment between two small HDAs."""
    cells = sorted(source.cells)
    options = [[y for y in target.cells if target.cells[y] == source.cells[x]] for x in cells]
    out = []
    for choice in itertools.product(*options):
        m = dict(zip(cells, choice))
        if all(m[z] == target.faces[(m[x], a, nu)] for (x, a, nu), z in source.faces.items()):
            out.append(m)
    return out


def reachable(h):
    """Cells reachable from the initial cell by up-steps and upper faces (plain BFS)."""
    up = {}
    for (y, a, nu), x in h.faces.items():
        if nu == 0:
            up.setdefault(x, set()).add(y)
    seen, todo = {h.initial}, [h.initial]
    while todo:
        x = todo.pop()
        nxt = set(up.get(x, ()))
        nxt |= {z for (c, a, nu), z in h.faces.items() if c == x and nu == 1}
        for y in nxt - seen:
            seen.add(y)
            todo.append(y)
    return seen

"""Interval ipomsets: validation, gluing, decomposition, isomorphism, morphisms.

An ipomset carries two strict partial orders on its events: precedence ``<``
(stored as ``prec``) and event order ``⇢`` (stored as ``order``). Both are kept
transitively closed. Sources must be ``<``-minimal and targets ``<``-maximal.
"""

import itertools
import json
import re
from functools import cmp_to_key

from .errors import (BadInterface, Incompatible, LiteralSyntaxError, NotComposable,
                     NotInterval, NotLinear, NotStrictOrder, NotTotal, ValidationError)

ZERO, EXEC, ONE = "0", "exec", "1"
STATES = (ZERO, EXEC, ONE)

# Pairs (eps(q), eps(q')) allowed along q < q'.
PREC_IPOM = frozenset({(ONE, ONE), (ZERO, ZERO), (EXEC, EXEC),
                       (ONE, EXEC), (ONE, ZERO), (EXEC, ZERO)})


def transitive_closure(pairs):
    succ = {}
    for x, y in pairs:
        succ.setdefault(x, set()).add(y)
    closed = set()
    for start in list(succ):
        seen = set()
        stack = list(succ[start])
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ.get(y, ()))
        closed.update((start, y) for y in seen)
    return frozenset(closed)


def fresh_name(name, taken):
    while name in taken:
        name += "'"
    return name


class Ipomset:
    """Immutable ipomset. Build through :func:`validate_ipomset` or the helpers below."""

    __slots__ = ("events", "label", "prec", "order", "sources", "targets", "_cache")

    def __init__(self, events, label, prec, order, sources, targets):
        self.events = tuple(events)
        self.label = dict(label)
        self.prec = frozenset(prec)
        self.order = frozenset(order)
        self.sources = frozenset(sources)
        self.targets = frozenset(targets)
        self._cache = {}

    def __len__(self):
        return len(self.events)

    def _key(self):
        return (frozenset(self.events), frozenset(self.label.items()), self.prec,
                self.order, self.sources, self.targets)

    def __eq__(self, other):
        return isinstance(other, Ipomset) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        try:
            return f"Ipomset({render_ipomset(self)!r})"
        except ValidationError:
            return f"Ipomset(events={self.events!r})"

    def less(self, x, y):
        return (x, y) in self.prec

    def comparable(self, x, y):
        return (x, y) in self.prec or (y, x) in self.prec

    def essential_order(self):
        """Event order restricted to precedence-incomparable pairs."""
        return frozenset((x, y) for x, y in self.order if not self.comparable(x, y))

    def in_order(self, subset):
        """Sort a precedence-antichain by event order."""
        subset = list(subset)
        return tuple(sorted(subset, key=lambda x: sum((y, x) in self.order for y in subset)))

    def source_conclist(self):
        return tuple(self.label[e] for e in self.in_order(self.sources))

    def target_conclist(self):
        return tuple(self.label[e] for e in self.in_order(self.targets))

    def is_discrete(self):
        return not self.prec

    def rename(self, mapping):
        m = mapping.__getitem__
        return Ipomset([m(e) for e in self.events], {m(e): l for e, l in self.label.items()},
                       {(m(x), m(y)) for x, y in self.prec},
                       {(m(x), m(y)) for x, y in self.order},
                       map(m, self.sources), map(m, self.targets))


EMPTY = Ipomset((), {}, (), (), (), ())


def two_plus_two(events, prec):
    """Return the first 2+2 witness (x, z, y, w) or None."""
    below = {}
    for x, z in prec:
        below.setdefault(x, []).append(z)
    for x in events:
        for z in below.get(x, ()):
            for y in events:
                for w in below.get(y, ()):
                    if (x, w) not in prec and (y, z) not in prec:
                        return (x, z, y, w)
    return None


def validate_ipomset(events, label, prec=(), order=(), sources=(), targets=()):
    """Check every ipomset invariant and return the validated value."""
    events = tuple(events)
    evset = set(events)
    if len(evset) != len(events):
        raise ValidationError("duplicate event identifiers")
    if set(label) != evset:
        raise ValidationError("every event needs exactly one label")
    for rel, name in ((prec, "precedence"), (order, "event order")):
        for x, y in rel:
            if x not in evset or y not in evset:
                raise ValidationError(f"{name} mentions unknown event")
    prec_c = transitive_closure(prec)
    order_c = transitive_closure(order)
    for rel, name in ((prec_c, "precedence"), (order_c, "event order")):
        loops = sorted(x for x, y in rel if x == y)
        if loops:
            raise NotStrictOrder(f"{name} is not irreflexive/acyclic at {loops[0]!r}")
    for x, y in itertools.combinations(events, 2):
        if not ({(x, y), (y, x)} & (prec_c | order_c)):
            raise NotTotal(x, y)
    witness = two_plus_two(sorted(events), prec_c)
    if witness:
        raise NotInterval(witness)
    sources, targets = frozenset(sources), frozenset(targets)
    if not sources <= evset or not targets <= evset:
        raise BadInterface("interface mentions unknown event")
    for x, y in prec_c:
        if y in sources:
            raise BadInterface(f"source {y!r} is not precedence-minimal")
        if x in targets:
            raise BadInterface(f"target {x!r} is not precedence-maximal")
    return Ipomset(events, label, prec_c, order_c, sources, targets)


def is_interval(p):
    """Return ``(True, None)`` or ``(False, witness)``."""
    witness = two_plus_two(sorted(p.events), p.prec)
    return witness is None, witness


def discrete(items):
    """Discrete ipomset from ``(label, in_source, in_target)`` triples in event order."""
    ids, taken = [], set()
    for lab, _, _ in items:
        name = fresh_name(lab, taken)
        taken.add(name)
        ids.append(name)
    label = {e: it[0] for e, it in zip(ids, items)}
    order = {(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))}
    return Ipomset(ids, label, (), order,
                   [e for e, it in zip(ids, items) if it[1]],
                   [e for e, it in zip(ids, items) if it[2]])


def identity_ipomset(labels):
    """The discrete ipomset on a conclist with full interfaces."""
    return discrete([(l, True, True) for l in labels])


# --- maximal antichains ---------------------------------------------------

def _cliques(vertices, adj):
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(vertices), frozenset())
    return out


def precedes(p, u, t):
    """The antichain order: u before t when u != t and nothing of t lies below u."""
    return set(u) != set(t) and not any(p.less(y, x) for x in u for y in t)


def maximal_antichains(p):
    """All maximal antichains as event tuples in event order, sorted by the antichain order."""
    if "antichains" in p._cache:
        return p._cache["antichains"]
    adj = {x: frozenset(y for y in p.events if y != x and not p.comparable(x, y))
           for x in p.events}
    chains = _cliques(p.events, adj)

    def cmp(u, t):
        if precedes(p, u, t):
            return -1
        if precedes(p, t, u):
            return 1
        return 0

    chains.sort(key=cmp_to_key(cmp))
    for i, j in itertools.combinations(range(len(chains)), 2):
        if not precedes(p, chains[i], chains[j]) or precedes(p, chains[j], chains[i]):
            raise NotLinear("antichain order is not linear")
    result = [p.in_order(c) for c in chains]
    p._cache["antichains"] = result
    return result


def minimal_discrete_decomposition(p):
    """Factor p into discrete ipomsets, one per maximal antichain."""
    chains = maximal_antichains(p)
    factors = []
    for i, chain in enumerate(chains):
        s = p.sources if i == 0 else set(chains[i - 1]) & set(chain)
        t = p.targets if i == len(chains) - 1 else set(chain) & set(chains[i + 1])
        order = {(chain[a], chain[b]) for a in range(len(chain)) for b in range(a + 1, len(chain))}
        factors.append(Ipomset(chain, {e: p.label[e] for e in chain}, (), order, s, t))
    return factors


# --- gluing ----------------------------------------------------------------

def glue_with_map(p, q):
    """Glue p*q; also return the event map from q into the result."""
    tp = p.in_order(p.targets)
    sq = q.in_order(q.sources)
    if [p.label[e] for e in tp] != [q.label[e] for e in sq]:
        raise NotComposable(
            f"target interface {p.target_conclist()} does not match source interface "
            f"{q.source_conclist()}")
    qmap = dict(zip(sq, tp))
    taken = set(p.events)
    for e in q.events:
        if e not in qmap:
            qmap[e] = fresh_name(e, taken | set(q.events) - {e})
            taken.add(qmap[e])
    rq = q.rename(qmap)
    p_rest = [e for e in p.events if e not in p.targets]
    q_rest = [qmap[e] for e in q.events if e not in q.sources]
    prec = p.prec | rq.prec | {(x, y) for x in p_rest for y in q_rest}
    order = transitive_closure(p.order | rq.order)
    events = p.events + tuple(qmap[e] for e in q.events if e not in q.sources)
    label = dict(p.label)
    label.update(rq.label)
    return Ipomset(events, label, prec, order, p.sources, rq.targets), qmap


def glue(p, q):
    return glue_with_map(p, q)[0]


def glue_all(factors):
    factors = list(factors)
    if not factors:
        return EMPTY
    out = factors[0]
    for f in factors[1:]:
        out = glue(out, f)
    return out


# --- canonical form and isomorphism ---------------------------------------

def canonical_form(p):
    """Rename events by (first antichain index, position in it). Returns (ipomset, renaming)."""
    if "canon" in p._cache:
        return p._cache["canon"]
    chains = maximal_antichains(p)
    ren = {}
    for k, chain in enumerate(chains):
        for j, e in enumerate(chain):
            if e not in ren:
                ren[e] = f"{k}.{j}"
    order = set()
    for chain in chains:
        order.update((ren[chain[a]], ren[chain[b]])
                     for a in range(len(chain)) for b in range(a + 1, len(chain)))
    events = sorted(ren.values(), key=lambda s: tuple(map(int, s.split("."))))
    canon = Ipomset(events, {ren[e]: l for e, l in p.label.items()},
                    {(ren[x], ren[y]) for x, y in p.prec}, transitive_closure(order),
                    {ren[e] for e in p.sources}, {ren[e] for e in p.targets})
    p._cache["canon"] = (canon, ren)
    return canon, ren


def iso(p, q):
    """The unique isomorphism p -> q as a dict, or None."""
    if len(p) != len(q):
        return None
    cp, rp = canonical_form(p)
    cq, rq = canonical_form(q)
    if cp != cq:
        return None
    back = {v: k for k, v in rq.items()}
    return {x: back[rp[x]] for x in p.events}


def isomorphic(p, q):
    return iso(p, q) is not None


# --- morphisms of the ipomset category ------------------------------------

class IpMorphism:
    """A morphism (f, eps) from ``source`` to ``target``."""

    __slots__ = ("source", "target", "f", "eps")

    def __init__(self, source, target, f, eps):
        self.source = source
        self.target = target
        self.f = dict(f)
        self.eps = dict(eps)

    def __eq__(self, other):
        return (isinstance(other, IpMorphism) and self.source == other.source
                and self.target == other.target and self.f == other.f and self.eps == other.eps)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.f.items()),
                     frozenset(self.eps.items())))

    def __repr__(self):
        return f"IpMorphism(f={self.f}, eps={self.eps})"

    @property
    def zeros(self):
        return frozenset(e for e, v in self.eps.items() if v == ZERO)

    @property
    def ones(self):
        return frozenset(e for e, v in self.eps.items() if v == ONE)

    def problems(self):
        """List of violated morphism conditions (empty when valid)."""
        p, q, f, eps = self.source, self.target, self.f, self.eps
        out = []
        if set(f) != set(p.events) or not set(f.values()) <= set(q.events):
            out.append("f is not a map between the event sets")
            return out
        if len(set(f.values())) != len(f):
            out.append("f is not injective")
        if set(eps) != set(q.events) or not set(eps.values()) <= set(STATES):
            out.append("eps is not a state function on the target")
            return out
        if any(p.label[x] != q.label[f[x]] for x in p.events):
            out.append("f does not preserve labels")
        for x, y in itertools.permutations(p.events, 2):
            if q.less(f[x], f[y]) and not p.less(x, y):
                out.append(f"f does not reflect precedence on ({x}, {y})")
            if (x, y) in p.order and not p.comparable(x, y) and (f[x], f[y]) not in q.order:
                out.append(f"f does not preserve event order on ({x}, {y})")
        if {e for e, v in eps.items() if v == EXEC} != set(f.values()):
            out.append("eps does not mark exactly the image of f as executing")
        for a, b in q.prec:
            if (eps[a], eps[b]) not in PREC_IPOM:
                out.append(f"eps violates the precedence constraint on ({a}, {b})")
        return out

    def is_valid(self):
        return not self.problems()


def identity_ip(p):
    return IpMorphism(p, p, {e: e for e in p.events}, {e: EXEC for e in p.events})


def compose_ip(m1, m2):
    """Composite m2 after m1, for m1: P -> Q and m2: Q -> R."""
    if m1.target != m2.source:
        raise Incompatible("target of the first morphism is not the source of the second")
    g_inv = {v: k for k, v in m2.f.items()}
    f = {x: m2.f[y] for x, y in m1.f.items()}
    eta = {u: (m1.eps[g_inv[u]] if u in g_inv else m2.eps[u]) for u in m2.target.events}
    return IpMorphism(m1.source, m2.target, f, eta)


def initial_inclusion_ip(p, r):
    """Inclusion p -> p*r; events of r outside p get 0."""
    g = glue(p, r)
    return IpMorphism(p, g, {e: e for e in p.events},
                      {e: (EXEC if e in p.label else ZERO) for e in g.events})


def final_inclusion_ip(p, r):
    """Inclusion r -> p*r; events of p outside r get 1."""
    g, rmap = glue_with_map(p, r)
    image = set(rmap.values())
    return IpMorphism(r, g, rmap, {e: (EXEC if e in image else ONE) for e in g.events})


# --- literal syntax and JSON ------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\[)|(\])|(\*)|([.•]?)([^\s\[\]*.•]+)([.•]?))")


def parse_ipomset(text):
    """Parse ``[.a. b] * [.a. c]`` style literals; ``[]`` is the empty ipomset."""
    steps, pos, n = [], 0, len(text)
    current = None
    expect_step = True
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LiteralSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            if current is not None or not expect_step:
                raise LiteralSyntaxError("unexpected '['", pos)
            current = []
        elif m.group(2):
            if current is None:
                raise LiteralSyntaxError("unexpected ']'", pos)
            steps.append(discrete(current))
            current = None
            expect_step = False
        elif m.group(3):
            if current is not None or expect_step:
                raise LiteralSyntaxError("unexpected '*'", pos)
            expect_step = True
        else:
            if current is None:
                raise LiteralSyntaxError("event outside brackets", pos)
            current.append((m.group(5), bool(m.group(4)), bool(m.group(6))))
        pos = m.end()
    if current is not None:
        raise LiteralSyntaxError("unterminated '['", n)
    if expect_step:
        raise LiteralSyntaxError("expected '['", n)
    return glue_all(steps)


def render_ipomset(p):
    """Literal for the minimal discrete decomposition of p."""
    parts = []
    for fac in minimal_discrete_decomposition(p):
        evs = [("." if e in fac.sources else "") + fac.label[e] + ("." if e in fac.targets else "")
               for e in fac.events]
        parts.append("[" + " ".join(evs) + "]")
    return " * ".join(parts)


IPOMSET_FIELDS = {"events", "precedence", "eventOrder", "sources", "targets"}


def ipomset_from_json(obj):
    if not isinstance(obj, dict) or "events" not in obj:
        raise ValidationError("ipomset document needs an 'events' field")
    unknown = sorted(set(obj) - IPOMSET_FIELDS)
    if unknown:
        raise ValidationError(f"unknown ipomset field(s) {unknown}")
    events = [e["id"] for e in obj.get("events", [])]
    label = {e["id"]: e["label"] for e in obj.get("events", [])}
    return validate_ipomset(events, label,
                            [tuple(x) for x in obj.get("precedence", [])],
                            [tuple(x) for x in obj.get("eventOrder", [])],
                            obj.get("sources", []), obj.get("targets", []))


def ipomset_to_json(p):
    return {
        "events": [{"id": e, "label": p.label[e]} for e in p.events],
        "precedence": sorted([list(x) for x in p.prec]),
        "eventOrder": sorted([list(x) for x in p.order]),
        "sources": sorted(p.sources),
        "targets": sorted(p.targets),
    }


def load_ipomset(text):
    """Accept either a literal or a JSON object."""
    stripped = text.strip()
    if stripped.startswith("{"):
        return ipomset_from_json(json.loads(stripped))
    return parse_ipomset(stripped)

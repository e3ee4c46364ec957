"""Equivalence checks between HDAs: cell relations, open maps, and bounded path/track games."""

from collections import deque
from dataclasses import dataclass, field

from .errors import InitialMismatch, ValidationError
from .hda import Hda, accessible_cells, lift, map_violation, subsets
from .ipomset import canonical_form
from .paths import (DOWN, UP, Path, characteristic_path, empty_path, restrictions,
                    track_from_path, weakenings)
from .tracks import Track, glue_tracks, track_object


@dataclass
class Verdict:
    kind: str
    related: bool
    witness: object = None
    bound: int = None
    exact: bool = True
    span: object = None
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.related

    def to_json(self):
        out = {"kind": self.kind, "related": self.related, "exact": self.exact}
        if self.bound is not None:
            out["bound"] = self.bound
        if self.notes:
            out["notes"] = list(self.notes)
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def check_initials(y, z):
    if y.ev(y.initial) != z.ev(z.initial):
        raise InitialMismatch(
            f"initial cells carry different events {list(y.ev(y.initial))} and "
            f"{list(z.ev(z.initial))}")


# --- cell relations ----------------------------------------------------------

def _refine(y, z, ycells, zcells, closed):
    """Greatest relation on the given cells. Returns (relation, removal reasons)."""
    rel = {(a, b) for a in ycells for b in zcells if y.ev(a) == z.ev(b)}
    reasons = {}
    yacc, zacc = set(ycells), set(zcells)

    def violation(pair):
        a, b = pair
        n = y.dim(a)
        for idx in subsets(n):
            for nu in ((0, 1) if closed else (1,)):
                fp = (y.face(a, idx, nu), z.face(b, idx, nu))
                if fp not in rel:
                    return {"condition": f"face{nu}", "A": list(idx), "faces": list(fp)}
            if not closed:
                fa, fb = y.face(a, idx, 0), z.face(b, idx, 0)
                ina, inb = fa in yacc, fb in zacc
                if ina != inb:
                    return {"condition": "accessible-face0", "A": list(idx),
                            "faces": [fa, fb], "accessible": [ina, inb]}
                if ina and (fa, fb) not in rel:
                    return {"condition": "face0", "A": list(idx), "faces": [fa, fb]}
        for side, (h1, c1, h2, c2) in enumerate(((y, a, z, b), (z, b, y, a))):
            for idx, up in h1.up_steps(c1):
                if up not in (yacc if side == 0 else zacc):
                    continue
                partners = [w for j, w in h2.up_steps(c2) if j == idx]
                ok = [w for w in partners
                      if ((up, w) if side == 0 else (w, up)) in rel]
                if not ok:
                    return {"condition": "up-step", "side": "left" if side == 0 else "right",
                            "A": list(idx), "cell": up, "candidates": partners}
        return None

    changed = True
    while changed:
        changed = False
        for pair in sorted(rel):
            if pair not in rel:
                continue
            why = violation(pair)
            if why is not None:
                rel.discard(pair)
                reasons[pair] = why
                changed = True
    return rel, reasons


def _explain(pair, reasons, y, z, depth=0, seen=None):
    """Well-founded explanation tree for why a pair was removed."""
    seen = set() if seen is None else seen
    why = dict(reasons.get(pair, {"condition": "labels"}))
    node = {"pair": list(pair), **why}
    if depth > 12 or pair in seen:
        return node
    seen = seen | {pair}
    if why.get("condition") in ("face0", "face1"):
        node["because"] = _explain(tuple(why["faces"]), reasons, y, z, depth + 1, seen)
    elif why.get("condition") == "up-step":
        left = why["side"] == "left"
        node["because"] = [
            _explain((why["cell"], w) if left else (w, why["cell"]), reasons, y, z, depth + 1, seen)
            for w in why["candidates"]]
    return node


def closed_cell_bisim(y, z):
    """Greatest closed cell-bisimulation over all cells."""
    check_initials(y, z)
    rel, reasons = _refine(y, z, sorted(y.cells), sorted(z.cells), closed=True)
    init = (y.initial, z.initial)
    if init in rel:
        return Verdict("closed-cell", True, sorted([list(p) for p in rel]))
    return Verdict("closed-cell", False, _explain(init, reasons, y, z))


def cell_relation(y, z):
    yacc, zacc = accessible_cells(y), accessible_cells(z)
    return _refine(y, z, sorted(yacc), sorted(zacc), closed=False)


def cell_bisim(y, z):
    """Greatest cell-bisimulation over accessible cells."""
    check_initials(y, z)
    rel, reasons = cell_relation(y, z)
    init = (y.initial, z.initial)
    if init in rel:
        return Verdict("cell", True, sorted([list(p) for p in rel]))
    return Verdict("cell", False, _explain(init, reasons, y, z))


def check_cell_relation(y, z, rel, closed):
    """Independent validator for a claimed (closed) cell-bisimulation; returns first problem."""
    rel = {tuple(p) for p in rel}
    if (y.initial, z.initial) not in rel:
        return "initial cells are not related"
    yacc, zacc = (set(y.cells), set(z.cells)) if closed else (accessible_cells(y),
                                                              accessible_cells(z))
    for a, b in rel:
        if a not in yacc or b not in zacc:
            return f"pair {(a, b)} leaves the allowed cells"
        if y.ev(a) != z.ev(b):
            return f"pair {(a, b)} has different events"
        for idx in subsets(y.dim(a)):
            if (y.face(a, idx, 1), z.face(b, idx, 1)) not in rel:
                return f"upper faces of {(a, b)} at {idx} unrelated"
            fa, fb = y.face(a, idx, 0), z.face(b, idx, 0)
            if closed:
                if (fa, fb) not in rel:
                    return f"lower faces of {(a, b)} at {idx} unrelated"
            else:
                if (fa in yacc) != (fb in zacc):
                    return f"lower faces of {(a, b)} at {idx} differ in accessibility"
                if fa in yacc and (fa, fb) not in rel:
                    return f"lower faces of {(a, b)} at {idx} unrelated"
        for idx, up in y.up_steps(a):
            if not any(j == idx and (up, w) in rel for j, w in z.up_steps(b)):
                return f"up-step {idx} from {a} into {up} unmatched"
        for idx, up in z.up_steps(b):
            if not any(j == idx and (w, up) in rel for j, w in y.up_steps(a)):
                return f"up-step {idx} from {b} into {up} unmatched"
    return None


# --- spans of open maps ------------------------------------------------------

def is_open(source, target, assignment):
    """Future path lifting, checked one up-step at a time from accessible source cells."""
    problem = map_violation(source, target, assignment)
    if problem:
        raise ValidationError(f"not an HDA map: {problem}")
    return open_violation(source, target, assignment) is None


def open_violation(source, target, assignment):
    for x in sorted(accessible_cells(source)):
        fx = assignment[x]
        for idx, y2 in target.up_steps(fx):
            if not any(j == idx and assignment[x2] == y2 for j, x2 in source.up_steps(x)):
                return {"cell": x, "A": list(idx), "target": y2}
    return None


def span_from_relation(y, z, rel):
    """HDA on related pairs (closed under faces) with its two projections."""
    pairs = set(tuple(p) for p in rel)
    queue = deque(sorted(pairs))
    while queue:
        a, b = queue.popleft()
        for idx in subsets(y.dim(a)):
            for nu in (0, 1):
                fp = (y.face(a, idx, nu), z.face(b, idx, nu))
                if fp not in pairs:
                    pairs.add(fp)
                    queue.append(fp)
    name = {p: f"{p[0]}|{p[1]}" for p in pairs}
    cells = {name[p]: y.ev(p[0]) for p in pairs}
    faces = {}
    for p in pairs:
        for idx in subsets(y.dim(p[0])):
            for nu in (0, 1):
                faces[(name[p], idx, nu)] = name[(y.face(p[0], idx, nu), z.face(p[1], idx, nu))]
    span = Hda(cells, faces, name[(y.initial, z.initial)])
    left = {name[p]: p[0] for p in pairs}
    right = {name[p]: p[1] for p in pairs}
    return span, left, right


def t0_bisim(y, z):
    """Cell-bisimulation packaged as a span of open maps when related."""
    v = cell_bisim(y, z)
    v.kind = "t0"
    if v.related:
        v.span = span_from_relation(y, z, v.witness)
    return v


# --- bounded path game -------------------------------------------------------

def extend(path, direction, idx, cell):
    """Append a step and merge it into the last step when directions agree."""
    h = path.hda
    if path.steps and path.steps[-1][0] == direction:
        prev = path.steps[-1][1]
        if direction == UP:
            merged = tuple(sorted(lift(prev, idx, h.dim(cell)) + idx))
        else:
            merged = tuple(sorted(prev + lift(idx, prev, h.dim(path.cells[-2]))))
        return Path(h, path.cells[:-1] + (cell,), path.steps[:-1] + ((direction, merged),))
    return Path(h, path.cells + (cell,), path.steps + ((direction, idx),))


def single_steps(h, x):
    """All steps leaving x as (direction, index set, target cell)."""
    out = [(UP, idx, y) for idx, y in h.up_steps(x)]
    out += [(DOWN, idx, y) for idx, y in h.down_steps(x)]
    return out


def answers(h, x, direction, idx, labels):
    if direction == DOWN:
        return [h.face(x, idx, 1)]
    return [y for j, y in h.up_steps(x) if j == idx and h.ev(y) == labels]


def restriction_keys(path):
    """Restrictions of a path indexed by (j, weakening set) in a shape-only way."""
    out = [((0, ()), path.prefix(0))]
    for j in range(1, len(path) + 1):
        b = path.steps[j - 1][1]
        for idx, beta in zip(subsets(len(b), nonempty=False), weakenings(path, j)):
            out.append(((j, tuple(b[i] for i in idx)), beta))
    return out


class PathGame:
    """Bounded attacker/defender game on pairs of same-shape sparse paths."""

    def __init__(self, y, z, strong):
        self.y, self.z, self.strong = y, z, strong
        self.memo = {}

    def key(self, a, b, k):
        if self.strong:
            return (a.cells, a.steps, b.cells, k)
        return (a.end, b.end, k)

    def attacks(self, a, b):
        """Yield (move description, [(response description, next a, next b)])."""
        for side in (0, 1):
            p, q = (a, b) if side == 0 else (b, a)
            hp, hq = p.hda, q.hda
            for direction, idx, cell in single_steps(hp, p.end):
                p2 = extend(p, direction, idx, cell)
                resp = []
                for c2 in answers(hq, q.end, direction, idx, hp.ev(cell)):
                    q2 = extend(q, direction, idx, c2)
                    resp.append((c2, (p2, q2) if side == 0 else (q2, p2)))
                move = {"side": "left" if side == 0 else "right",
                        "move": {"step": {"direction": direction, "A": list(idx), "cell": cell}}}
                yield move, resp
        if self.strong:
            for (key, a2), (_, b2) in zip(restriction_keys(a), restriction_keys(b)):
                if a2 == a:
                    continue
                move = {"side": "left",
                        "move": {"restriction": {"j": key[0], "A": list(key[1])}}}
                yield move, [(b2.end, (a2, b2))]

    def wins(self, a, b, k):
        """True when the defender survives k more rounds."""
        if k == 0:
            return True
        key = self.key(a, b, k)
        if key in self.memo:
            return self.memo[key]
        result = True
        for _, resp in self.attacks(a, b):
            if not any(self.wins(a2, b2, k - 1) for _, (a2, b2) in resp):
                result = False
                break
        self.memo[key] = result
        return result

    def strategy(self, a, b, k):
        """Attacker's winning strategy tree from a losing defender position."""
        for move, resp in self.attacks(a, b):
            if not any(self.wins(a2, b2, k - 1) for _, (a2, b2) in resp):
                node = dict(move)
                node["responses"] = [{"cell": c, "then": self.strategy(a2, b2, k - 1)}
                                     for c, (a2, b2) in resp]
                return node
        raise AssertionError("defender wins here")

    def relation(self, a, b, k, out):
        """Pairs reached by the defender's winning strategy."""
        out.append((a, b))
        if k == 0:
            return
        for _, resp in self.attacks(a, b):
            for _, (a2, b2) in resp:
                if self.wins(a2, b2, k - 1):
                    self.relation(a2, b2, k - 1, out)
                    break


def bounded_path_bisim(y, z, k, strong=False, witness=False):
    check_initials(y, z)
    game = PathGame(y, z, strong)
    a, b = empty_path(y, y.initial), empty_path(z, z.initial)
    kind = "strong-path" if strong else "path"
    if game.wins(a, b, k):
        rel = None
        if witness:
            pairs = []
            game.relation(a, b, k, pairs)
            rel = [[p.to_spec(), q.to_spec()] for p, q in dict.fromkeys(pairs)]
        return Verdict(kind, True, rel, bound=k, exact=False)
    return Verdict(kind, False, game.strategy(a, b, k), bound=k, exact=False)


def strong_path_bisim_exact(y, z, k=None):
    """Exact when the initial cells are vertices; otherwise a bounded verdict."""
    check_initials(y, z)
    if y.dim(y.initial) == 0:
        v = cell_bisim(y, z)
        v.kind = "strong-path"
        return v
    k = default_depth(y, z) if k is None else k
    v = bounded_path_bisim(y, z, k, strong=True)
    v.notes.append("initial cells are not vertices: verdict holds up to the stated bound only")
    return v


# --- bounded track game ------------------------------------------------------

def canonical_track(t):
    """Rename the domain of a track to its canonical ipomset."""
    canon, ren = canonical_form(t.obj.ipomset)
    obj = track_object(canon)
    assignment = {}
    for cell, st in t.obj.state_of.items():
        assignment[obj.cell_of({ren[e]: v for e, v in st.items()})] = t.assignment[cell]
    return Track(obj, t.hda, assignment)


def compose_track(t, inner):
    """t after a track ``inner`` into t's domain."""
    return Track(inner.obj, t.hda, {c: t.assignment[v] for c, v in inner.assignment.items()})


class TrackGame:
    """The bounded game played on pairs of tracks with a common domain."""

    def __init__(self, y, z, strong):
        self.y, self.z, self.strong = y, z, strong
        self.memo = {}
        self.ext_cache = {}

    def extensions(self, t):
        """Tracks extending t along the initial inclusion by one step, keyed by the step label."""
        key = (t.hda is self.y, t)
        if key in self.ext_cache:
            return self.ext_cache[key]
        h = t.hda
        out = {}
        x = t.end
        for direction, idx, cell in single_steps(h, x):
            step = Path(h, [x, cell], [(direction, idx)])
            r = track_from_path(step)
            glued = canonical_track(glue_tracks(t, r))
            label = canonical_form(r.obj.ipomset)[0]
            out.setdefault(label, []).append(glued)
        self.ext_cache[key] = out
        return out

    def restrictions(self, t1, t2):
        rho = characteristic_path(t1.obj.ipomset)
        out = []
        for beta in restrictions(rho):
            if beta == rho:
                continue
            incl = track_from_path(beta)
            out.append((beta.to_spec(), canonical_track(compose_track(t1, incl)),
                        canonical_track(compose_track(t2, incl))))
        return out

    def attacks(self, t1, t2):
        for side in (0, 1):
            p, q = (t1, t2) if side == 0 else (t2, t1)
            ep, eq = self.extensions(p), self.extensions(q)
            for label, exts in ep.items():
                for p2 in exts:
                    resp = [(q2, (p2, q2) if side == 0 else (q2, p2))
                            for q2 in eq.get(label, [])
                            if q2.obj.ipomset == p2.obj.ipomset]
                    yield side, resp
        if self.strong:
            for _, a2, b2 in self.restrictions(t1, t2):
                yield 0, [(b2, (a2, b2))]

    def wins(self, t1, t2, k):
        if k == 0:
            return True
        key = (t1, t2, k)
        if key in self.memo:
            return self.memo[key]
        result = all(any(self.wins(a, b, k - 1) for _, (a, b) in resp)
                     for _, resp in self.attacks(t1, t2))
        self.memo[key] = result
        return result


def initial_track(h):
    return canonical_track(track_from_path(empty_path(h, h.initial)))


def bounded_track_bisim(y, z, k, strong=False):
    check_initials(y, z)
    game = TrackGame(y, z, strong)
    related = game.wins(initial_track(y), initial_track(z), k)
    return Verdict("strong-track" if strong else "track", related, bound=k, exact=False)


# --- depth defaults ----------------------------------------------------------

def diameter(h):
    """Longest shortest-path distance in the undirected face graph of h."""
    adj = {x: set() for x in h.cells}
    for (x, _, _), y in h.faces.items():
        adj[x].add(y)
        adj[y].add(x)
    best = 0
    for s in h.cells:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        best = max(best, max(dist.values()))
    return best


def default_depth(y, z):
    """Depth used when none is given: enough rounds to walk across either HDA and back."""
    return 2 * max(diameter(y), diameter(z)) + 1

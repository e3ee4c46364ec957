"""Finite precubical sets with explicit face tables, standard cubes and Yoneda maps.

A cell's events are the positions ``0..n-1`` of its signature (a tuple of
labels in event order). A face is addressed by a sorted tuple of positions
``A`` and a direction ``nu`` in {0, 1}.
"""

import itertools
import json
from collections import deque

from .errors import (FunctorialityViolation, MissingFace, NoInitial, SignatureMismatch,
                     UnknownCellRef, ValidationError)


def subsets(n, nonempty=True):
    """All sorted index tuples of ``range(n)``."""
    start = 1 if nonempty else 0
    for k in range(start, n + 1):
        yield from itertools.combinations(range(n), k)


def delete_indices(seq, idx):
    idx = set(idx)
    return tuple(v for i, v in enumerate(seq) if i not in idx)


def reindex(a, removed):
    """Positions ``a`` after deleting positions ``removed``."""
    removed = sorted(removed)
    return tuple(sorted(i - sum(1 for r in removed if r < i) for i in a))


def lift(a, removed, n):
    """Inverse of :func:`reindex`: positions in ``range(n)`` that survive ``removed``."""
    keep = [i for i in range(n) if i not in set(removed)]
    return tuple(sorted(keep[i] for i in a))


class Hda:
    """A finite HDA. ``faces[(x, A, nu)]`` holds the face cell."""

    def __init__(self, cells, faces, initial, final=()):
        self.cells = dict(cells)
        self.faces = dict(faces)
        self.initial = initial
        self.final = tuple(final)
        self._up = None

    def __repr__(self):
        return f"Hda({len(self.cells)} cells, initial={self.initial!r})"

    def ev(self, x):
        return self.cells[x]

    def dim(self, x):
        return len(self.cells[x])

    def face(self, x, a, nu):
        a = tuple(sorted(a))
        if not a:
            return x
        n = self.dim(x)
        if any(i < 0 or i >= n for i in a):
            raise ValidationError(f"index set {a} out of range for cell {x!r}")
        return self.faces[(x, a, nu)]

    def face_ab(self, x, a, b):
        """delta_{A,B}(x): positions A go to 0 and positions B go to 1."""
        a, b = tuple(sorted(a)), tuple(sorted(b))
        if set(a) & set(b):
            raise ValidationError("face index sets must be disjoint")
        y = self.face(x, b, 1)
        return self.face(y, reindex(a, b), 0)

    def with_initial(self, initial):
        return Hda(self.cells, self.faces, initial, self.final)

    def up_steps(self, x):
        """Pairs (A, y) with delta^0_A(y) = x."""
        if self._up is None:
            up = {c: [] for c in self.cells}
            for (y, a, nu), z in self.faces.items():
                if nu == 0:
                    up[z].append((a, y))
            for v in up.values():
                v.sort(key=lambda t: (t[0], str(t[1])))
            self._up = up
        return self._up[x]

    def down_steps(self, x):
        """Pairs (B, delta^1_B(x))."""
        return [(b, self.faces[(x, b, 1)]) for b in subsets(self.dim(x))]


def check_hda(h):
    """Raise on the first violated invariant; return h otherwise."""
    if not h.cells:
        raise NoInitial("an HDA needs at least one cell")
    if h.initial not in h.cells:
        raise NoInitial(f"initial cell {h.initial!r} is not a cell")
    for f in h.final:
        if f not in h.cells:
            raise UnknownCellRef(f"final cell {f!r} is not a cell")
    for x, sig in h.cells.items():
        for a in subsets(len(sig)):
            for nu in (0, 1):
                if (x, a, nu) not in h.faces:
                    raise MissingFace(f"cell {x!r} lacks face {nu} at {list(a)}")
                y = h.faces[(x, a, nu)]
                if y not in h.cells:
                    raise UnknownCellRef(f"face of {x!r} refers to unknown cell {y!r}")
                if h.cells[y] != delete_indices(sig, a):
                    raise SignatureMismatch(
                        f"face {nu} at {list(a)} of {x!r} is {y!r} with events "
                        f"{list(h.cells[y])}, expected {list(delete_indices(sig, a))}")
    for key in h.faces:
        if key[0] not in h.cells:
            raise UnknownCellRef(f"face entry for unknown cell {key[0]!r}")
    witness = functoriality_witness(h)
    if witness:
        err = FunctorialityViolation(f"composed faces disagree at {witness}")
        err.witness = witness
        raise err
    return h


def functoriality_witness(h):
    """First (x, A, nu, B, mu) where composed faces disagree, or None."""
    for x, sig in h.cells.items():
        n = len(sig)
        for b in subsets(n):
            rest = [i for i in range(n) if i not in b]
            for a in subsets(len(rest)):
                a_full = lift(a, b, n)
                for mu in (0, 1):
                    inner = h.faces[(x, b, mu)]
                    for nu in (0, 1):
                        lhs = h.faces[(inner, a, nu)]
                        if nu == mu:
                            rhs = h.faces[(x, tuple(sorted(a_full + b)), nu)]
                        else:
                            other = h.faces[(x, a_full, nu)]
                            rhs = h.faces[(other, reindex(b, a_full), mu)]
                        if lhs != rhs:
                            return (x, a_full, nu, b, mu)
    return None


def load_hda(document):
    """Build and validate an HDA from its JSON document (str or parsed dict)."""
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    cells, faces = {}, {}
    for c in document.get("cells", []):
        cid = c["id"]
        if cid in cells:
            raise ValidationError(f"duplicate cell id {cid!r}")
        cells[cid] = tuple(c.get("events", []))
        for nu_key, table in (c.get("faces") or {}).items():
            if nu_key not in ("0", "1"):
                raise ValidationError(f"face direction must be '0' or '1', got {nu_key!r}")
            for key, target in table.items():
                idx = tuple(sorted(int(s) for s in key.split(",") if s.strip() != ""))
                faces[(cid, idx, int(nu_key))] = target
    if "initial" not in document:
        raise NoInitial("document has no initial cell")
    return check_hda(Hda(cells, faces, document["initial"], document.get("final", [])))


def hda_to_json(h):
    cells = []
    for x, sig in h.cells.items():
        fz = {"0": {}, "1": {}}
        for a in subsets(len(sig)):
            for nu in (0, 1):
                fz[str(nu)][",".join(map(str, a))] = h.faces[(x, a, nu)]
        cells.append({"id": x, "events": list(sig), "faces": fz})
    return {"cells": cells, "initial": h.initial, "final": list(h.final)}


# --- cubes built from state functions --------------------------------------

def state_id(events, state):
    return ",".join(f"{e}:{s}" for e, s in zip(events, state))


def hda_from_states(events, label, states, initial, final, order_key):
    """HDA whose cells are state functions (tuples over ``events`` of '0'/'exec'/'1').

    A cell's signature lists its executing events sorted by ``order_key``;
    face A/nu sets those events to nu. ``states`` must be closed under faces.
    """
    states = list(states)
    ids = {s: state_id(events, s) for s in states}
    cells, faces = {}, {}
    for s in states:
        running = sorted((i for i, v in enumerate(s) if v == "exec"),
                         key=lambda i: order_key(events[i]))
        x = ids[s]
        cells[x] = tuple(label[events[i]] for i in running)
        for a in subsets(len(running)):
            for nu in (0, 1):
                t = list(s)
                for j in a:
                    t[running[j]] = str(nu)
                faces[(x, a, nu)] = ids[tuple(t)]
    return Hda(cells, faces, ids[tuple(initial)], [ids[tuple(f)] for f in final])


def cube_events(labels):
    names, taken = [], set()
    for lab in labels:
        name = lab
        while name in taken:
            name += "'"
        taken.add(name)
        names.append(name)
    return names


def standard_cube(labels):
    """The standard cube on a conclist. Returns (hda, id of the top cell)."""
    labels = tuple(labels)
    events = cube_events(labels)
    pos = {e: i for i, e in enumerate(events)}
    states = list(itertools.product(("0", "exec", "1"), repeat=len(events)))
    h = hda_from_states(events, dict(zip(events, labels)), states,
                        ("0",) * len(events), [("1",) * len(events)], pos.__getitem__)
    return h, state_id(events, ("exec",) * len(events))


def cube_cell_sets(h_cube, cell):
    """(A, B) position sets of a standard cube cell id."""
    vals = [part.rsplit(":", 1)[1] for part in cell.split(",")] if cell else []
    return (tuple(i for i, v in enumerate(vals) if v == "0"),
            tuple(i for i, v in enumerate(vals) if v == "1"))


def yoneda_map(h, x):
    """The precubical map from the standard cube on ev(x) into h sending the top cell to x.

    Returns (cube, top, assignment).
    """
    cube, top = standard_cube(h.ev(x))
    assignment = {}
    for c in cube.cells:
        a, b = cube_cell_sets(cube, c)
        assignment[c] = h.face_ab(x, a, b)
    return cube, top, assignment


def map_violation(source, target, assignment, check_initial=True):
    """First violated equation of a candidate HDA map, or None."""
    for x, sig in source.cells.items():
        if x not in assignment:
            return f"cell {x!r} is unassigned"
        y = assignment[x]
        if y not in target.cells:
            return f"cell {x!r} maps to unknown cell {y!r}"
        if target.cells[y] != sig:
            return f"cell {x!r} and its image {y!r} have different events"
    for (x, a, nu), z in source.faces.items():
        if assignment[z] != target.face(assignment[x], a, nu):
            return f"face {nu} at {list(a)} of {x!r} does not commute"
    if check_initial and assignment[source.initial] != target.initial:
        return "initial cell is not preserved"
    return None


def validate_map(source, target, assignment, check_initial=True):
    return map_violation(source, target, assignment, check_initial) is None


def accessible_cells(h):
    """Least set containing the initial cell, closed under upper faces and up-steps."""
    seen = {h.initial}
    queue = deque([h.initial])
    while queue:
        x = queue.popleft()
        nxt = [y for _, y in h.down_steps(x)] + [y for _, y in h.up_steps(x)]
        for y in nxt:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)

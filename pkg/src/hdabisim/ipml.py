"""Ipomset modal logic: syntax, satisfaction on paths and tracks, distinguishing formulas.

Grammar::

    F := tt | ff | (F & F) | (F | F) | <R>F | <-Q>F

where ``R`` and ``Q`` are ipomset literals. ``<R>F`` extends the current path
by a path labelled R; ``<-Q>F`` moves to a restriction labelled Q.
"""

from dataclasses import dataclass

from .bisim import check_initials, extend, single_steps
from .errors import InterfaceMismatch, LiteralSyntaxError
from .ipomset import (Ipomset, canonical_form, isomorphic, parse_ipomset, render_ipomset,
                      validate_ipomset)
from .paths import concat, empty_path, ev, label_extensions, path_from_track, restrictions, sparse


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Fwd:
    label: Ipomset
    body: object


@dataclass(frozen=True)
class Bwd:
    label: Ipomset
    body: object


TT, FF = Top(), Bot()


def conj(parts):
    parts = [p for p in parts if p != TT]
    if not parts:
        return TT
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def disj(parts):
    parts = [p for p in parts if p != FF]
    if not parts:
        return FF
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Or(p, out)
    return out


def modal_depth(f):
    if isinstance(f, (Top, Bot)):
        return 0
    if isinstance(f, (And, Or)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


# --- text form -------------------------------------------------------------------

def parse_formula(text):
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(tok):
        nonlocal pos
        skip()
        if not text.startswith(tok, pos):
            raise LiteralSyntaxError(f"expected {tok!r}", pos)
        pos += len(tok)

    def formula():
        nonlocal pos
        skip()
        if text.startswith("tt", pos):
            pos += 2
            return TT
        if text.startswith("ff", pos):
            pos += 2
            return FF
        if text.startswith("(", pos):
            pos += 1
            left = formula()
            skip()
            if pos < len(text) and text[pos] in "&|":
                op = text[pos]
                pos += 1
            else:
                raise LiteralSyntaxError("expected '&' or '|'", pos)
            right = formula()
            expect(")")
            return And(left, right) if op == "&" else Or(left, right)
        if text.startswith("<", pos):
            backward = text.startswith("<-", pos)
            pos += 2 if backward else 1
            end = text.find(">", pos)
            if end < 0:
                raise LiteralSyntaxError("unterminated modality", pos)
            try:
                label = parse_ipomset(text[pos:end])
            except LiteralSyntaxError as err:
                raise LiteralSyntaxError(f"bad ipomset literal ({err})", pos + err.position)
            pos = end + 1
            body = formula()
            return Bwd(label, body) if backward else Fwd(label, body)
        raise LiteralSyntaxError("expected a formula", pos)

    f = formula()
    skip()
    if pos != len(text):
        raise LiteralSyntaxError("trailing input", pos)
    return f


def render_formula(f):
    if isinstance(f, Top):
        return "tt"
    if isinstance(f, Bot):
        return "ff"
    if isinstance(f, And):
        return f"({render_formula(f.left)} & {render_formula(f.right)})"
    if isinstance(f, Or):
        return f"({render_formula(f.left)} | {render_formula(f.right)})"
    arrow = "<-" if isinstance(f, Bwd) else "<"
    return f"{arrow}{render_ipomset(f.label)}>{render_formula(f.body)}"


def same_formula(f, g):
    """Structural equality with ipomset labels compared up to isomorphism."""
    if type(f) is not type(g):
        return False
    if isinstance(f, (Top, Bot)):
        return True
    if isinstance(f, (And, Or)):
        return same_formula(f.left, g.left) and same_formula(f.right, g.right)
    return isomorphic(f.label, g.label) and same_formula(f.body, g.body)


# --- satisfaction ------------------------------------------------------------------

def strip_sources(p):
    """The sub-ipomset on events outside the source interface."""
    keep = [e for e in p.events if e not in p.sources]
    ks = set(keep)
    return validate_ipomset(keep, {e: p.label[e] for e in keep},
                            [(a, b) for a, b in p.prec if a in ks and b in ks],
                            [(a, b) for a, b in p.order if a in ks and b in ks],
                            (), [e for e in p.targets if e in ks])


def label_matches(label, q):
    """ev of a restriction against a backward parameter, completing a missing source interface."""
    if isomorphic(label, q):
        return True
    return bool(label.sources) and not q.sources and isomorphic(strip_sources(label), q)


class Checker:
    """Memoised satisfaction on sparse paths of one HDA."""

    def __init__(self, h):
        self.h = h
        self.memo = {}

    def sat(self, alpha, f):
        alpha = sparse(alpha)
        key = (alpha, f)
        if key in self.memo:
            return self.memo[key]
        if isinstance(f, Top):
            result = True
        elif isinstance(f, Bot):
            result = False
        elif isinstance(f, And):
            result = self.sat(alpha, f.left) and self.sat(alpha, f.right)
        elif isinstance(f, Or):
            result = self.sat(alpha, f.left) or self.sat(alpha, f.right)
        elif isinstance(f, Fwd):
            try:
                exts = label_extensions(alpha, f.label)
            except InterfaceMismatch:
                exts = []
            result = any(self.sat(concat(alpha, beta), f.body) for beta in exts)
        elif isinstance(f, Bwd):
            result = any(label_matches(ev(a2), f.label) and self.sat(a2, f.body)
                         for a2 in restrictions(alpha))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[key] = result
        return result


def sat(alpha, f):
    return Checker(alpha.hda).sat(alpha, f)


def sat_track(t, f):
    return sat(path_from_track(t), f)


def sat_initial(h, f):
    return sat(empty_path(h, h.initial), f)


# --- distinguishing formulas -------------------------------------------------------

def sparse_extensions(alpha, max_steps):
    """(label, extended path) for every sparse extension of 1..max_steps steps."""
    h = alpha.hda
    out = []
    frontier = [(empty_path(h, alpha.end), None)]
    for _ in range(max_steps):
        nxt = []
        for beta, last in frontier:
            for direction, idx, cell in single_steps(h, beta.end):
                if last == direction:
                    continue
                b2 = extend(beta, direction, idx, cell)
                out.append((canonical_form(ev(b2))[0], sparse(concat(alpha, b2))))
                nxt.append((b2, direction))
        frontier = nxt
    return out


class Distinguisher:
    """Synthesises formulas true on one path and false on another."""

    def __init__(self, backward, max_steps):
        self.backward = backward
        self.max_steps = max_steps
        self.memo = {}
        self.ext_memo = {}

    def moves(self, alpha):
        if alpha not in self.ext_memo:
            groups = {}
            for label, a2 in sparse_extensions(alpha, self.max_steps):
                groups.setdefault(label, []).append(a2)
            # finished executions first, then longer labels: these read best
            self.ext_memo[alpha] = sorted(
                groups.items(),
                key=lambda kv: (bool(kv[0].targets), -len(kv[0].events), render_ipomset(kv[0])))
        return self.ext_memo[alpha]

    def answers(self, beta, label):
        try:
            return [sparse(concat(beta, b)) for b in label_extensions(beta, label)]
        except InterfaceMismatch:
            return []

    def find(self, alpha, beta, k):
        """A formula of depth <= k true at alpha and false at beta, or None."""
        if k == 0:
            return None
        key = (alpha, beta, k)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None
        result = None
        for label, exts in self.moves(alpha):
            others = self.answers(beta, label)
            for a2 in exts:
                parts = []
                for b2 in others:
                    g = self.find(a2, b2, k - 1)
                    if g is None:
                        break
                    parts.append(g)
                else:
                    result = Fwd(label, conj(parts))
                    break
            if result is not None:
                break
        if result is None and self.backward:
            for a2 in restrictions(alpha):
                if a2 == alpha:
                    continue
                label = canonical_form(ev(a2))[0]
                others = [b2 for b2 in restrictions(beta) if isomorphic(ev(b2), label)]
                parts = []
                for b2 in others:
                    g = self.find(a2, b2, k - 1)
                    if g is None:
                        break
                    parts.append(g)
                else:
                    result = Bwd(label, conj(parts))
                    break
        self.memo[key] = result
        return result


def distinguishing_formula(y, z, k, use_backward=False, max_steps=2):
    """Search both directions; returns (formula, side holding it) or (None, None)."""
    check_initials(y, z)
    a, b = empty_path(y, y.initial), empty_path(z, z.initial)
    d = Distinguisher(use_backward, max_steps)
    f = d.find(a, b, k)
    if f is not None:
        return f, "left"
    f = d.find(b, a, k)
    if f is not None:
        return f, "right"
    return None, None


def distinguish(y, z, k, use_backward=False, max_steps=2):
    """A verified formula of modal depth <= k separating the initial paths, or None."""
    f, side = distinguishing_formula(y, z, k, use_backward, max_steps)
    if f is None:
        return None
    left, right = sat_initial(y, f), sat_initial(z, f)
    if left == right or (side == "left") != left:
        raise AssertionError(f"synthesised formula {render_formula(f)} does not separate")
    return f

"""Example HDAs built from cubes placed in the plane or in space.

A cube is given by an origin point and a list of ``(label, vector)`` events in
event order. Two cubes share a cell when that cell has the same origin and the
same vectors in the same order; labels of shared cells must agree.
"""

import json
from importlib import resources

from .errors import ValidationError
from .hda import Hda, check_hda, load_hda, subsets


def _vec_str(v):
    return ",".join(str(c) for c in v)


def _add(p, v):
    return tuple(a + b for a, b in zip(p, v))


def default_name(origin, events):
    if not events:
        return "v" + _vec_str(origin)
    return "".join(l for l, _ in events) + "@" + _vec_str(origin) + "/" + ";".join(
        _vec_str(v) for _, v in events)


def geometric_hda(cubes, initial, final=(), names=None):
    """Face-closed HDA generated by ``cubes``.

    ``initial`` and ``final`` are given as ``(origin, [vector, ...])`` keys.
    ``names`` optionally maps such keys to readable cell ids.
    """
    names = {(tuple(o), tuple(tuple(v) for v in vs)): n for (o, vs), n in (names or {}).items()}
    labels = {}
    faces = {}

    def key_of(origin, events):
        return (tuple(origin), tuple(tuple(v) for _, v in events))

    def visit(origin, events):
        k = key_of(origin, events)
        labs = tuple(l for l, _ in events)
        if k in labels:
            if labels[k] != labs:
                raise ValidationError(f"cell at {k} gets two label lists {labels[k]} and {labs}")
            return k
        labels[k] = labs
        for a in subsets(len(events)):
            rest = [e for i, e in enumerate(events) if i not in a]
            shifted = origin
            for i in a:
                shifted = _add(shifted, events[i][1])
            faces[(k, a, 0)] = visit(origin, rest)
            faces[(k, a, 1)] = visit(shifted, rest)
        return k

    for origin, events in cubes:
        visit(tuple(origin), [(l, tuple(v)) for l, v in events])

    def name(k):
        if k in names:
            return names[k]
        return default_name(k[0], list(zip(labels[k], k[1])))

    def find(spec):
        k = (tuple(spec[0]), tuple(tuple(v) for v in spec[1]))
        if k not in labels:
            raise ValidationError(f"no cell at {k}")
        return name(k)

    cells = {name(k): labs for k, labs in labels.items()}
    if len(cells) != len(labels):
        raise ValidationError("cell names collide")
    table = {(name(k), a, nu): name(v) for (k, a, nu), v in faces.items()}
    return check_hda(Hda(cells, table, find(initial), [find(f) for f in final]))


UP_ = (0, 1)
RIGHT = (1, 0)
DOWN_ = (0, -1)


def three_square_x1(node_initial=False):
    """Two squares side by side plus a third square hanging below the right one."""
    cubes = [((0, 0), [("a", UP_), ("c", RIGHT)]),
             ((1, 0), [("a", UP_), ("d", RIGHT)]),
             ((1, 0), [("b", DOWN_), ("d", RIGHT)])]
    names = {((0, 0), (UP_, RIGHT)): "x1", ((1, 0), (UP_, RIGHT)): "y1",
             ((1, 0), (DOWN_, RIGHT)): "z1"}
    init = ((0, 0), []) if node_initial else ((0, 0), [UP_])
    return geometric_hda(cubes, init, [((2, 1), [])], names)


def two_square_x2(node_initial=False):
    """Two squares side by side, nothing below."""
    cubes = [((0, 0), [("a", UP_), ("c", RIGHT)]),
             ((1, 0), [("a", UP_), ("d", RIGHT)])]
    names = {((0, 0), (UP_, RIGHT)): "x2", ((1, 0), (UP_, RIGHT)): "y2"}
    init = ((0, 0), []) if node_initial else ((0, 0), [UP_])
    return geometric_hda(cubes, init, [((2, 1), [])], names)


def filled_square():
    return geometric_hda([((0, 0), [("a", RIGHT), ("b", UP_)])], ((0, 0), []),
                         [((1, 1), [])], {((0, 0), (RIGHT, UP_)): "x"})


def hollow_square():
    cubes = [((0, 0), [("a", RIGHT)]), ((1, 0), [("b", UP_)]),
             ((0, 0), [("b", UP_)]), ((0, 1), [("a", RIGHT)])]
    return geometric_hda(cubes, ((0, 0), []), [((1, 1), [])])


BUILDERS = {
    "X1": lambda: three_square_x1(False),
    "X2": lambda: two_square_x2(False),
    "X1_node": lambda: three_square_x1(True),
    "X2_node": lambda: two_square_x2(True),
    "filled_square": filled_square,
    "hollow_square": hollow_square,
}


def example(name):
    """Load a bundled example HDA by name (for instance ``"X1"``)."""
    text = resources.files("hdabisim").joinpath("data", f"{name}.json").read_text()
    return load_hda(json.loads(text))


def example_names():
    return sorted(BUILDERS)

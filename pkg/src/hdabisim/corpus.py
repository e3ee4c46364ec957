"""Seeded random HDAs: cube complexes on the integer grid, and pairs of them.

A cell is a grid point plus a set of axes. An edge along axis ``i`` whose base
point has coordinate ``c`` on that axis carries ``labels[i][c]``, so shared
faces always agree on their events. Events of a cube are listed in axis order.
"""

import itertools
import json
import os
import random

from .fixtures import geometric_hda
from .hda import hda_to_json, subsets

DEFAULT_BOUNDS = {"max_dim": 2, "side": 3, "max_tops": 4, "alphabet": "ab"}


def unit(axis, dim):
    return tuple(1 if i == axis else 0 for i in range(dim))


def closure(tops):
    """All faces (point, axes) of the given cells."""
    out = set()
    for point, axes in tops:
        for keep in subsets(len(axes), nonempty=False):
            rest = [ax for ax in axes if ax not in {axes[i] for i in keep}]
            for shift in itertools.product((0, 1), repeat=len(keep)):
                p = list(point)
                for i, s in zip(keep, shift):
                    p[axes[i]] += s
                out.add((tuple(p), tuple(rest)))
    return out


def maximal(cells):
    faces = set()
    for point, axes in cells:
        if axes:
            faces |= closure([(point, axes)]) - {(point, axes)}
    return sorted(cells - faces)


def build(cells, dim, labels, initial):
    cubes = [(point, [(labels[ax][point[ax]], unit(ax, dim)) for ax in axes])
             for point, axes in maximal(cells)]
    init = (initial[0], [unit(ax, dim) for ax in initial[1]])
    return geometric_hda(cubes, init)


class Shape:
    """A cube complex before it is turned into an HDA."""

    def __init__(self, dim, labels, cells, initial):
        self.dim = dim
        self.labels = labels
        self.cells = set(cells)
        self.initial = initial

    def hda(self):
        return build(self.cells, self.dim, self.labels, self.initial)

    def without(self, removed):
        return Shape(self.dim, self.labels, self.cells - set(removed), self.initial)


def random_shape(rng, bounds, edge_initial=False, first_label=None):
    dim = rng.randint(1, bounds["max_dim"])
    side = bounds["side"]
    alphabet = bounds["alphabet"]
    labels = [[rng.choice(alphabet) for _ in range(side)] for _ in range(dim)]
    if first_label is not None:
        labels[0][0] = first_label
    origin = (0,) * dim
    initial = (origin, (0,)) if edge_initial else (origin, ())
    tops = {initial}
    for _ in range(rng.randint(1, bounds["max_tops"])):
        k = rng.randint(1, dim)
        axes = tuple(sorted(rng.sample(range(dim), k)))
        point = tuple(rng.randrange(side) if i in axes else rng.randrange(side + 1)
                      for i in range(dim))
        tops.add((point, axes))
    # one top always sits at the origin so the initial cell can move
    axes = tuple(sorted(rng.sample(range(dim), rng.randint(1, dim))))
    if edge_initial and 0 not in axes:
        axes = tuple(sorted(axes + (0,)))
    tops.add((origin, axes))
    return Shape(dim, labels, closure(tops), initial)


def mutate(rng, shape, max_removed=2):
    """Delete a few maximal cells other than the initial one."""
    out = shape
    for _ in range(rng.randint(1, max_removed)):
        choices = [c for c in maximal(out.cells) if c != out.initial and c[1]]
        if not choices:
            break
        out = out.without([rng.choice(choices)])
    return out


def random_pair(rng, bounds):
    """(Y, Z, kind) with matching initial events."""
    edge = rng.random() < 0.3
    kind = rng.choice(["mutant", "mutant", "identical", "independent"])
    y = random_shape(rng, bounds, edge_initial=edge)
    if kind == "identical":
        z = y
    elif kind == "mutant":
        z = mutate(rng, y)
    else:
        first = y.labels[0][0] if edge else None
        z = random_shape(rng, bounds, edge_initial=edge, first_label=first)
    return y.hda(), z.hda(), kind


def corpus_pairs(seed, count, bounds=None):
    bounds = {**DEFAULT_BOUNDS, **(bounds or {})}
    rng = random.Random(seed)
    return [random_pair(rng, bounds) for _ in range(count)]


def gen_corpus(seed, count, outdir, bounds=None):
    """Write ``count`` pairs as numbered HDA files plus manifest.json; returns the manifest."""
    bounds = {**DEFAULT_BOUNDS, **(bounds or {})}
    os.makedirs(outdir, exist_ok=True)
    pairs = []
    for i, (y, z, kind) in enumerate(corpus_pairs(seed, count, bounds)):
        names = (f"hda_{2 * i:03d}.json", f"hda_{2 * i + 1:03d}.json")
        for name, h in zip(names, (y, z)):
            with open(os.path.join(outdir, name), "w") as fh:
                json.dump(hda_to_json(h), fh, indent=1)
                fh.write("\n")
        pairs.append({"left": names[0], "right": names[1], "kind": kind})
    manifest = {"seed": seed, "count": count, "bounds": bounds, "pairs": pairs}
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")
    return manifest

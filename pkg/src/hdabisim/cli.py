"""Command line front end.

Exit codes: 0 success or true, 1 false or not related, 2 usage error, 3 invalid input.
"""

import argparse
import json
import os
import sys

from .bisim import (bounded_path_bisim, bounded_track_bisim, cell_bisim, closed_cell_bisim,
                    default_depth, t0_bisim)
from .corpus import DEFAULT_BOUNDS, gen_corpus
from .errors import NotInterval, ValidationError
from .fixtures import BUILDERS, example
from .hda import hda_to_json, load_hda
from .ipml import distinguish, modal_depth, parse_formula, render_formula, sat
from .ipomset import (glue_all, ipomset_to_json, is_interval, iso, load_ipomset,
                      minimal_discrete_decomposition, render_ipomset)
from .paths import build_path, empty_path, ev
from .tracks import track_object

KINDS = ("closed-cell", "cell", "t0", "path", "strong-path", "track", "strong-track")


class UsageError(Exception):
    pass


def read_text(arg):
    """File contents when ``arg`` names a file, otherwise ``arg`` itself."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def load_model(arg):
    """An HDA from a JSON file or the name of a bundled example (``X1`` or ``X1.json``)."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ValidationError(f"{arg}: not JSON ({err})")
        try:
            return load_hda(doc)
        except (KeyError, TypeError, AttributeError) as err:
            raise ValidationError(f"{arg}: malformed HDA document, missing or bad field {err}")
    name = os.path.basename(arg)
    name = name[:-5] if name.endswith(".json") else name
    if name in BUILDERS:
        return example(name)
    raise UsageError(f"no such file or bundled example: {arg}")


def load_ipomset_arg(arg):
    text = read_text(arg)
    try:
        return load_ipomset(text)
    except json.JSONDecodeError as err:
        raise ValidationError(f"not JSON ({err})")
    except (KeyError, TypeError) as err:
        raise ValidationError(f"malformed ipomset document, missing or bad field {err}")


def load_path(h, arg):
    if arg is None:
        return empty_path(h, h.initial)
    try:
        spec = json.loads(read_text(arg))
    except json.JSONDecodeError as err:
        raise ValidationError(f"path is not JSON ({err})")
    if not isinstance(spec, list):
        raise ValidationError("path must be a JSON array of steps")
    return build_path(h, spec)


def emit(args, human, data):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(human)


# --- verbs ---------------------------------------------------------------------

def looks_like_hda(arg):
    if not os.path.isfile(arg):
        name = os.path.basename(arg)
        return (name[:-5] if name.endswith(".json") else name) in BUILDERS
    text = read_text(arg).lstrip()
    if not text.startswith("{"):
        return False
    try:
        return "cells" in json.loads(text)
    except json.JSONDecodeError:
        return True


def cmd_validate(args):
    reports, lines = [], []
    for item in args.inputs:
        if looks_like_hda(item):
            h = load_model(item)
            dims = {}
            for x in h.cells:
                dims[h.dim(x)] = dims.get(h.dim(x), 0) + 1
            report = {"input": item, "type": "hda", "cells": len(h.cells),
                      "by_dimension": {str(k): v for k, v in sorted(dims.items())},
                      "initial": h.initial}
            line = f"{item}: valid HDA, {len(h.cells)} cells, initial {h.initial}"
            if args.path:
                load_path(h, args.path)
                report["path"] = "valid"
                line += ", path valid"
        else:
            p = load_ipomset_arg(item)
            report = {"input": item, "type": "ipomset", "events": len(p),
                      "literal": render_ipomset(p)}
            line = f"{item}: valid interval ipomset {render_ipomset(p)}"
        reports.append(report)
        lines.append(line)
    emit(args, "\n".join(lines), {"valid": True, "inputs": reports})
    return 0


def cmd_bisim(args):
    y, z = load_model(args.left), load_model(args.right)
    depth = args.depth
    if args.kind in ("path", "strong-path", "track", "strong-track") and depth is None:
        depth = default_depth(y, z)
    if args.kind == "closed-cell":
        v = closed_cell_bisim(y, z)
    elif args.kind == "cell":
        v = cell_bisim(y, z)
    elif args.kind == "t0":
        v = t0_bisim(y, z)
    elif args.kind in ("path", "strong-path"):
        v = bounded_path_bisim(y, z, depth, strong=args.kind == "strong-path",
                               witness=bool(args.emit_witness))
    else:
        v = bounded_track_bisim(y, z, depth, strong=args.kind == "strong-track")
    if args.emit_witness:
        with open(args.emit_witness, "w", encoding="utf-8") as fh:
            json.dump(v.witness, fh, indent=2)
            fh.write("\n")
    word = "related" if v.related else "not related"
    human = f"{args.kind}: {word}"
    if v.bound is not None:
        human += f" (bounded to depth {v.bound})"
    for note in v.notes:
        human += f"\nnote: {note}"
    if not v.related and v.witness is not None:
        human += "\nwitness: " + json.dumps(v.witness)
    emit(args, human, v.to_json())
    return 0 if v.related else 1


def cmd_check(args):
    h = load_model(args.model)
    f = parse_formula(args.formula)
    alpha = load_path(h, args.path)
    holds = sat(alpha, f)
    data = {"formula": render_formula(f), "holds": holds, "path": alpha.to_spec(),
            "modal_depth": modal_depth(f)}
    emit(args, f"{render_formula(f)}: {'holds' if holds else 'fails'}", data)
    return 0 if holds else 1


def cmd_decompose(args):
    p = load_ipomset_arg(args.ipomset)
    factors = minimal_discrete_decomposition(p)
    emit(args, "\n".join(render_ipomset(f) for f in factors),
         {"factors": [render_ipomset(f) for f in factors],
          "json": [ipomset_to_json(f) for f in factors]})
    return 0


def cmd_glue(args):
    p = glue_all([load_ipomset_arg(a) for a in args.ipomsets])
    emit(args, render_ipomset(p), {"literal": render_ipomset(p), "json": ipomset_to_json(p)})
    return 0


def cmd_iso(args):
    p, q = load_ipomset_arg(args.left), load_ipomset_arg(args.right)
    m = iso(p, q)
    if m is None:
        emit(args, "not isomorphic", {"isomorphic": False})
        return 1
    emit(args, "isomorphic: " + ", ".join(f"{a}->{b}" for a, b in m.items()),
         {"isomorphic": True, "mapping": m})
    return 0


def cmd_interval(args):
    try:
        p = load_ipomset_arg(args.ipomset)
    except NotInterval as err:
        emit(args, f"not an interval ipomset, 2+2 witness {list(err.witness)}",
             {"interval": False, "witness": list(err.witness)})
        return 1
    ok, witness = is_interval(p)
    if not ok:
        emit(args, f"not an interval ipomset, 2+2 witness {list(witness)}",
             {"interval": False, "witness": list(witness)})
        return 1
    emit(args, "interval", {"interval": True, "literal": render_ipomset(p)})
    return 0


def cmd_track_object(args):
    p = load_ipomset_arg(args.ipomset)
    obj = track_object(p)
    doc = hda_to_json(obj.hda)
    if args.json or not args.summary:
        print(json.dumps(doc, indent=2))
    else:
        dims = {}
        for x in obj.hda.cells:
            dims[obj.hda.dim(x)] = dims.get(obj.hda.dim(x), 0) + 1
        print(f"{len(obj.hda.cells)} cells; by dimension "
              + ", ".join(f"{k}: {v}" for k, v in sorted(dims.items())))
    return 0


def cmd_label(args):
    h = load_model(args.model)
    alpha = load_path(h, args.path)
    p = ev(alpha)
    emit(args, render_ipomset(p), {"literal": render_ipomset(p), "json": ipomset_to_json(p)})
    return 0


def cmd_distinguish(args):
    y, z = load_model(args.left), load_model(args.right)
    f = distinguish(y, z, args.depth, use_backward=args.backward, max_steps=args.max_steps)
    if f is None:
        emit(args, f"no distinguishing formula of modal depth <= {args.depth}",
             {"formula": None, "depth": args.depth})
        return 1
    emit(args, render_formula(f), {"formula": render_formula(f), "depth": args.depth,
                                   "modal_depth": modal_depth(f)})
    return 0


def cmd_gen_corpus(args):
    if not 1 <= args.max_dim <= 3:
        raise UsageError("--max-dim must be between 1 and 3")
    if args.side < 1 or args.max_tops < 1 or args.count < 0:
        raise UsageError("--side, --max-tops must be at least 1 and --count non-negative")
    if not args.alphabet:
        raise UsageError("--alphabet must contain at least one label")
    bounds = {"max_dim": args.max_dim, "side": args.side, "max_tops": args.max_tops,
              "alphabet": args.alphabet}
    manifest = gen_corpus(args.seed, args.count, args.out, bounds)
    emit(args, f"wrote {2 * len(manifest['pairs'])} HDAs and manifest.json to {args.out} "
               f"(seed {args.seed})", manifest)
    return 0


# --- parser --------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    parser = argparse.ArgumentParser(
        prog="hdabisim", description="Bisimulations and modal logic for higher dimensional automata.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate HDA documents or ipomsets")
    p.add_argument("inputs", nargs="+", help="HDA JSON files, ipomset literals or JSON")
    p.add_argument("--path", help="also validate this path against the (single) HDA")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("bisim", parents=[common], help="decide an equivalence between two HDAs")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--depth", type=int, help="round bound for game-based kinds")
    p.add_argument("--emit-witness", metavar="FILE", help="write the witness JSON here")
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("check", parents=[common], help="evaluate a formula on a path")
    p.add_argument("model")
    p.add_argument("--formula", required=True)
    p.add_argument("--path", help="path JSON (file or text); default is the initial path")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("decompose", parents=[common], help="minimal discrete decomposition")
    p.add_argument("ipomset")
    p.set_defaults(run=cmd_decompose)

    p = sub.add_parser("glue", parents=[common], help="gluing composition of ipomsets")
    p.add_argument("ipomsets", nargs="+")
    p.set_defaults(run=cmd_glue)

    p = sub.add_parser("iso", parents=[common], help="ipomset isomorphism")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(run=cmd_iso)

    p = sub.add_parser("interval", parents=[common], help="interval order test with 2+2 witness")
    p.add_argument("ipomset")
    p.set_defaults(run=cmd_interval)

    p = sub.add_parser("track-object", parents=[common], help="HDA JSON of a track object")
    p.add_argument("ipomset")
    p.add_argument("--summary", action="store_true", help="print cell counts instead of JSON")
    p.set_defaults(run=cmd_track_object)

    p = sub.add_parser("label", parents=[common], help="ipomset label of a path")
    p.add_argument("model")
    p.add_argument("path")
    p.set_defaults(run=cmd_label)

    p = sub.add_parser("distinguish", parents=[common], help="synthesise a distinguishing formula")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--depth", type=int, default=2, help="modal depth bound")
    p.add_argument("--backward", action="store_true", help="allow backward modalities")
    p.add_argument("--max-steps", type=int, default=2,
                   help="steps per modality in the search (default 2)")
    p.set_defaults(run=cmd_distinguish)

    p = sub.add_parser("gen-corpus", parents=[common], help="write a seeded corpus of HDA pairs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=10, help="number of pairs")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--max-dim", type=int, default=DEFAULT_BOUNDS["max_dim"])
    p.add_argument("--side", type=int, default=DEFAULT_BOUNDS["side"])
    p.add_argument("--max-tops", type=int, default=DEFAULT_BOUNDS["max_tops"])
    p.add_argument("--alphabet", default=DEFAULT_BOUNDS["alphabet"])
    p.set_defaults(run=cmd_gen_corpus)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as err:
        print(f"hdabisim {args.verb}: {err}", file=sys.stderr)
        return 2
    except ValidationError as err:
        if getattr(args, "json", False):
            print(json.dumps({"error": type(err).__name__, "message": str(err)}, indent=2))
        print(f"hdabisim {args.verb}: {type(err).__name__}: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

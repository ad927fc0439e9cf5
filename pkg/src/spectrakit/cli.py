"""Command-line front end.

Every command prints one JSON document (sorted keys) that embeds the
configuration which produced it. The worker count is left out of that
configuration because it never changes the output.

Exit codes: 0 on success, 1 on domain or input errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds as bd
from .exceptions import SpectraKitError
from .interrogate import CandidateFamily, SpectrumOracle, identify
from .mcshane import mcshane_report
from .spectrum import (
    DEFAULT_MAX_WORD_LENGTH,
    DEFAULT_MERGE_TOLERANCE,
    EnumerationBudget,
    LengthSpectrum,
    default_workers,
    enumerate_spectrum,
    isospectral_compare,
)
from .surface import (
    BOUNDARY_WORD,
    CUFF_WORDS,
    FenchelNielsenSurface,
    build_one_holed_torus,
    build_surface,
    curve_length,
    relator_error,
    sample_genus2,
)


class InputError(SpectraKitError):
    """A file named on the command line is missing or malformed."""


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _surface_from_args(args):
    if args.surface:
        data = _load_json(args.surface)
        return FenchelNielsenSurface.from_dict(data.get("surface", data))
    if args.cuffs is None:
        raise InputError("give --surface FILE or --cuffs (with --twists)")
    twists = args.twists if args.twists is not None else [0.0] * len(args.cuffs)
    return FenchelNielsenSurface(args.topology, tuple(args.cuffs), tuple(twists), args.boundary_length)


def _spectrum_from_file(path):
    data = _load_json(path)
    return LengthSpectrum.from_dict(data.get("spectrum", data))


def _config(args, **extra):
    cfg = {"command": f"{args.command} {args.action}"}
    for key, value in vars(args).items():
        if key in ("command", "action", "workers", "handler", "output", "csv"):
            continue
        cfg[key] = value
    cfg.update(extra)
    return cfg


# --- handlers ------------------------------------------------------------------


def cmd_surface_build(args):
    fn = _surface_from_args(args)
    group = build_surface(fn)
    doc = {
        "config": _config(args),
        "surface": fn.to_dict(),
        "generators": {n: g.as_array().tolist() for n, g in zip(group.names, group.generators)},
        "presentation": group.presentation.value,
        "measured_cuff_lengths": [curve_length(group, w) for w in CUFF_WORDS[fn.topology]],
    }
    if fn.genus == 2:
        doc["relator_error"] = relator_error(group)
    else:
        doc["measured_boundary_length"] = curve_length(group, BOUNDARY_WORD)
    return doc


def cmd_spectrum_compute(args):
    fn = _surface_from_args(args)
    budget = EnumerationBudget(args.cutoff, args.max_word_length, not args.allow_uncertified)
    s = enumerate_spectrum(fn, budget, args.merge_tolerance, args.workers)
    if args.csv:
        Path(args.csv).write_text(s.to_csv())
    return {
        "config": _config(args, surface=fn.to_dict()),
        "spectrum": s.to_dict(),
        "representatives": [list(r) for r in s.representatives],
    }


def cmd_spectrum_compare(args):
    s1, s2 = _spectrum_from_file(args.first), _spectrum_from_file(args.second)
    cutoff = args.cutoff if args.cutoff is not None else min(s1.cutoff, s2.cutoff)
    same, index = isospectral_compare(s1, s2, cutoff, args.tolerance)
    return {
        "config": _config(args, cutoff=cutoff),
        "isospectral": same,
        "first_difference": index,
    }


def cmd_mcshane_verify(args):
    group = build_one_holed_torus(args.interior_length, args.twist, args.boundary_length)
    report = mcshane_report(group, args.boundary_length, args.cutoff)
    return {"config": _config(args), **report.to_dict()}


def cmd_bounds_eval(args):
    return {"config": _config(args), "bounds": bd.bounds_table(args.genus)}


def _family(args):
    if args.family:
        data = _load_json(args.family)
        members = data["members"] if isinstance(data, dict) and "members" in data else data
        if not isinstance(members, list) or not members:
            raise InputError("family file must hold a nonempty list of surfaces")
        out = []
        for i, m in enumerate(members):
            label = m.get("label", f"S{i}") if "surface" in m else f"S{i}"
            out.append((str(label), FenchelNielsenSurface.from_dict(m.get("surface", m))))
        return out
    rng = np.random.default_rng(args.seed)
    return [(f"S{i}", sample_genus2(rng)) for i in range(args.size)]


def cmd_interrogate_run(args):
    members = _family(args)
    if not 0 <= args.truth < len(members):
        raise InputError(f"--truth {args.truth} is outside the family of {len(members)}")
    budget = EnumerationBudget(args.cutoff, args.max_word_length, True)
    spectra = {
        label: enumerate_spectrum(fn, budget, args.merge_tolerance, args.workers) for label, fn in members
    }
    family = CandidateFamily(spectra)
    truth_label = members[args.truth][0]
    oracle = SpectrumOracle(spectra[truth_label])
    winner, transcript = identify(oracle, family, args.sweep)
    doc = transcript.to_dict()
    doc["config"] = _config(args, surfaces={label: fn.to_dict() for label, fn in members})
    doc["truth"] = truth_label
    doc["correct"] = truth_label in transcript.winners
    return doc


# --- parser --------------------------------------------------------------------


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--workers", type=int, default=default_workers(),
                   help="worker threads (default: $SPECTRAKIT_WORKERS or 1)")
    p.add_argument("--seed", type=int, default=0, help="seed for any random sampling")
    p.add_argument("--output", "-o", help="write JSON here instead of standard output")
    return p


def _surface_args(p):
    p.add_argument("--surface", help="JSON file with Fenchel-Nielsen data")
    p.add_argument("--topology", default="closed_genus2", choices=["closed_genus2", "one_holed_torus"])
    p.add_argument("--cuffs", type=float, nargs="+")
    p.add_argument("--twists", type=float, nargs="+")
    p.add_argument("--boundary-length", type=float, default=None)


def _enum_args(p, cutoff_default=6.0):
    p.add_argument("--cutoff", type=float, default=cutoff_default)
    p.add_argument("--max-word-length", type=int, default=DEFAULT_MAX_WORD_LENGTH)
    p.add_argument("--merge-tolerance", type=float, default=DEFAULT_MERGE_TOLERANCE)


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="spectrakit", description="Length spectra of hyperbolic surfaces.")
    top = parser.add_subparsers(dest="command", required=True)

    surface = top.add_parser("surface").add_subparsers(dest="action", required=True)
    p = surface.add_parser("build", parents=[common], help="build generators from Fenchel-Nielsen data")
    _surface_args(p)
    p.set_defaults(handler=cmd_surface_build)

    spectrum = top.add_parser("spectrum").add_subparsers(dest="action", required=True)
    p = spectrum.add_parser("compute", parents=[common], help="enumerate the length spectrum")
    _surface_args(p)
    _enum_args(p)
    p.add_argument("--allow-uncertified", action="store_true",
                   help="return a partial spectrum instead of failing")
    p.add_argument("--csv", help="also write length,multiplicity rows to this file")
    p.set_defaults(handler=cmd_spectrum_compute)
    p = spectrum.add_parser("compare", parents=[common], help="compare two spectrum files")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--cutoff", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.set_defaults(handler=cmd_spectrum_compare)

    mcshane = top.add_parser("mcshane").add_subparsers(dest="action", required=True)
    p = mcshane.add_parser("verify", parents=[common], help="partial sums of the boundary identity")
    p.add_argument("--boundary-length", type=float, default=2.0)
    p.add_argument("--interior-length", type=float, default=2.0)
    p.add_argument("--twist", type=float, default=0.0)
    p.add_argument("--cutoff", type=float, default=30.0)
    p.set_defaults(handler=cmd_mcshane_verify)

    bounds = top.add_parser("bounds").add_subparsers(dest="action", required=True)
    p = bounds.add_parser("eval", parents=[common], help="evaluate every counting bound")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(handler=cmd_bounds_eval)

    interrogate = top.add_parser("interrogate").add_subparsers(dest="action", required=True)
    p = interrogate.add_parser("run", parents=[common], help="identify a surface by questions")
    p.add_argument("--family", help="JSON list of surfaces; random genus-2 family if omitted")
    p.add_argument("--size", type=int, default=10, help="size of a random family")
    p.add_argument("--truth", type=int, default=0, help="index of the hidden surface")
    p.add_argument("--sweep", type=int, default=3)
    _enum_args(p)
    p.set_defaults(handler=cmd_interrogate_run)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers < 1:
        print("spectrakit: error: --workers must be positive", file=sys.stderr)
        return 2
    try:
        text = _dump(args.handler(args))
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    except SpectraKitError as exc:
        print(f"spectrakit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"spectrakit: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

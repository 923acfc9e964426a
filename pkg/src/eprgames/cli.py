"""Command-line entry point: ``eprgames {coeffs,dist,ne,sweep,verify}``.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 a
precondition such as game symmetry or embedding compatibility failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import equilibrium, measurement, oracle
from .games import GameFileError, GameMatrix, NotSymmetricError, canonical_embedding, coefficients
from .states import GHZ, W, EulerRotor, GeneralSymmetric, InvertedW, StateSpec

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3
VERIFY_TOL = 1e-10


class InputError(ValueError):
    pass


def _num(v: float):
    """Round to 12 significant digits for stable output; integers stay integral."""
    r = float(f"{float(v):.12g}") + 0.0
    return int(r) if r.is_integer() and abs(r) < 1e15 else r


def _dump(doc, out: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    _emit(text, out)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_game(path: str | None) -> GameMatrix:
    if not path:
        raise InputError("no game file given (positional argument or --game)")
    try:
        return GameMatrix.from_json(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


_STATE_KEYS = {"family", "gamma", "cos_gamma", "phi", "delta", "rotors"}


def _angle(doc: dict, key: str) -> float:
    v = doc.get(key, 0.0)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise InputError(f"state field {key!r} must be a finite number")
    return float(v)


def parse_state(doc) -> StateSpec:
    """Build a StateSpec from a StateFile document."""
    if not isinstance(doc, dict):
        raise InputError("state document must be a JSON object")
    unknown = set(doc) - _STATE_KEYS
    if unknown:
        raise InputError(f"unknown state fields {sorted(unknown)}")
    if "gamma" in doc and "cos_gamma" in doc:
        raise InputError("give gamma or cos_gamma, not both")
    if "cos_gamma" in doc:
        c = _angle(doc, "cos_gamma")
        if not -1.0 <= c <= 1.0:
            raise InputError(f"cos_gamma = {c} outside [-1, 1]")
        gamma = math.acos(c)
    else:
        gamma = _angle(doc, "gamma")
    phi, delta = _angle(doc, "phi"), _angle(doc, "delta")
    family = doc.get("family", "ghz")
    builders = {
        "ghz": lambda: GHZ(gamma),
        "w": W,
        "wbar": InvertedW,
        "symmetric": lambda: GeneralSymmetric(gamma, phi, delta),
    }
    if family not in builders:
        raise InputError(f"unknown family {family!r}; expected one of {sorted(builders)}")
    rotors_doc = doc.get("rotors", {})
    if not isinstance(rotors_doc, dict) or set(rotors_doc) - {"A", "B", "C"}:
        raise InputError("rotors must be an object with keys among A, B, C")
    rotors = []
    for name in "ABC":
        angles = rotors_doc.get(name, [0.0, 0.0, 0.0])
        if not isinstance(angles, list) or len(angles) != 3:
            raise InputError(f"rotor {name} must be a list of three angles")
        rotors.append(EulerRotor(*(float(a) for a in angles)))
    try:
        return StateSpec(builders[family](), tuple(rotors))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def load_state(path: str | None) -> StateSpec:
    if not path:
        raise InputError("no state file given (--state)")
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from exc
    return parse_state(doc)


# -- commands -----------------------------------------------------------------


def cmd_coeffs(args) -> int:
    co = coefficients(load_game(args.game_file or args.game)).as_dict()
    _dump({name: {k: _num(v) for k, v in table.items()} for name, table in co.items()}, args.out)
    return EXIT_OK


def cmd_dist(args) -> int:
    spec = load_state(args.state)
    choices = tuple(int(c) for c in args.choices)
    if len(choices) != 3 or set(choices) - {1, 2}:
        raise InputError("--choices takes three digits from {1, 2}, e.g. 121")
    p = measurement.distribution(spec, canonical_embedding().measurement(choices))
    _dump({k: _num(v) for k, v in p.as_dict().items()}, args.out)
    return EXIT_OK


def _ne_doc(ne: equilibrium.NEResult) -> dict:
    return {
        "ne": ne.label,
        "kind": ne.kind,
        "profile": None if ne.profile is None else [_num(v) for v in ne.profile],
        "payoffs": [_num(v) for v in ne.payoffs],
    }


def cmd_ne(args) -> int:
    g = load_game(args.game_file or args.game)
    spec = load_state(args.state)
    _dump([_ne_doc(ne) for ne in equilibrium.equilibria(spec, g)], args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    g = load_game(args.game_file or args.game)
    if not args.axis:
        raise InputError("at least one --axis is required")
    try:
        axes = [equilibrium.Axis.parse(a) for a in args.axis]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    diagram = equilibrium.sweep(g, args.family, axes)
    _emit(diagram.to_json() if args.format == "json" else diagram.to_csv(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    # looked up at call time so a substituted engine is the one checked
    report = oracle.cross_validate(args.trials, args.seed, measurement.distribution)
    doc = {
        "trials": report.trials,
        "seed": report.seed,
        "max_deviation": float(f"{report.max_deviation:.3e}"),
        "max_normalization_error": float(f"{report.max_normalization_error:.3e}"),
        "tolerance": VERIFY_TOL,
    }
    ok = report.passed(VERIFY_TOL)
    if not ok:
        rng = np.random.default_rng(args.seed)
        for _ in range(report.worst_trial + 1):
            spec, cfg = oracle.random_trial(rng)
        doc["offending_config"] = {
            "trial": report.worst_trial,
            "family": repr(spec.family),
            "rotors": [list(r.angles) for r in spec.local_rotors],
            "kappa": [list(k) for k in cfg.kappa],
            "choices": list(cfg.choices),
        }
    doc["status"] = "ok" if ok else "FAILED"
    _dump(doc, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eprgames", description="Three-player quantum games in the EPR setting.")
    sub = parser.add_subparsers(dest="command", required=True)

    def game_args(p):
        p.add_argument("game_file", nargs="?", help="GameFile JSON")
        p.add_argument("--game", help="GameFile JSON (alternative to the positional form)")

    p = sub.add_parser("coeffs", help="sign-sum payoff coefficients of a game")
    game_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("dist", help="outcome distribution under the canonical detectors")
    p.add_argument("--state", required=True)
    p.add_argument("--choices", default="111", help="direction per player, e.g. 121")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ne", help="Nash equilibria for a game and shared state")
    game_args(p)
    p.add_argument("--state", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ne)

    p = sub.add_parser("sweep", help="equilibria over a grid of state parameters")
    game_args(p)
    p.add_argument("--family", choices=equilibrium.FAMILIES, default="ghz")
    p.add_argument("--axis", action="append", help="name=start:stop:step or name=value (repeatable)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="cross-check the algebra engine against the complex-vector oracle")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NotSymmetricError, equilibrium.PreconditionError) as exc:
        print(f"eprgames: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, GameFileError, ValueError, OSError) as exc:
        print(f"eprgames: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

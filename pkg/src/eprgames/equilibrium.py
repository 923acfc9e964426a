"""Nash equilibria of the embedded quantum games and phase-diagram sweeps.

All payoffs here are multilinear in the three strategies, so a profile is an
equilibrium iff no player gains by jumping to either endpoint 0 or 1.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .games import (
    GameMatrix,
    NotSymmetricError,
    StrategyProfile,
    coefficients,
    ghz_payoff_fn,
    is_embedding,
    is_symmetric,
    payoff_function,
    symmetric_payoff_fn,
)
from .states import GHZ, W, GeneralSymmetric, InvertedW, StateSpec

__all__ = [
    "Axis",
    "GridPoint",
    "MaxPayoffResult",
    "NEResult",
    "PhaseDiagram",
    "PreconditionError",
    "equilibria",
    "is_ne",
    "max_payoff_search",
    "mixed_ne_symmetric",
    "ne_condition_general",
    "ne_condition_ghz",
    "pd_transition_threshold",
    "pure_ne_enumerate",
    "state_payoff_function",
    "sweep",
]

NE_TOL = 1e-9
CORNERS = tuple(itertools.product((0, 1), repeat=3))
FAMILIES = ("ghz", "symmetric")
_CANONICAL_KAPPA = ((0.0, math.pi),) * 3


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class NEResult:
    """One equilibrium.  ``margin`` is the smallest payoff any player gives up
    by switching to their other endpoint (about 0 for mixed equilibria)."""

    profile: StrategyProfile | None
    payoffs: tuple[float, float, float]
    kind: str
    margin: float

    @property
    def label(self) -> str:
        if self.profile is None:
            return "continuum"
        return "(" + ",".join(_fmt(v) for v in self.profile) + ")"

    def sort_key(self):
        if self.profile is None:
            return (1, ())
        return (0, tuple(self.profile))


def _fmt(v: float) -> str:
    out = f"{v:.12g}"
    return "0" if out == "-0" else out


def _kind(profile) -> str:
    return "pure-corner" if all(v in (0.0, 1.0) for v in profile) else "interior-mixed"


def _slack(s, payoff_fn) -> float:
    """Smallest payoff lost by any unilateral switch to a different endpoint."""
    base = payoff_fn(*s)
    out = math.inf
    for p in range(3):
        for e in (0.0, 1.0):
            if e == s[p]:
                continue
            dev = list(s)
            dev[p] = e
            out = min(out, base[p] - payoff_fn(*dev)[p])
    return out


def is_ne(s, payoff_fn, tol: float = NE_TOL) -> tuple[bool, float]:
    """(is an equilibrium, margin).

    The margin is the minimum of Pi_p(s) - Pi_p(s with s_p -> v) over the
    endpoints v in {0, 1}, staying put included, so it is <= 0 on corners and
    negative whenever some player can gain.
    """
    s = tuple(float(v) for v in s)
    margin = _slack(s, payoff_fn)
    if any(v in (0.0, 1.0) for v in s):
        margin = min(margin, 0.0)
    return margin >= -tol, margin


def _closed_form(g: GameMatrix, cg: float, phi: float = 0.0, delta: float = 0.0):
    """Payoff function on the symmetric family; phi = 0 is the GHZ state."""
    if phi == 0.0:
        return ghz_payoff_fn(g, cg)
    return symmetric_payoff_fn(g, cg, phi, delta)


def _symmetric_params(family):
    """(gamma, phi, delta) placing a family inside the symmetric superposition."""
    if isinstance(family, GHZ):
        return family.gamma, 0.0, 0.0
    if isinstance(family, GeneralSymmetric):
        return family.gamma, family.phi, family.delta
    if isinstance(family, W):
        return 0.0, math.pi, math.pi
    if isinstance(family, InvertedW):
        return 0.0, math.pi, 0.0
    return None


def state_payoff_function(spec: StateSpec, g: GameMatrix):
    """Mixed-strategy payoff function for ``spec`` under the canonical detectors.

    Symmetric games on the GHZ and symmetric families use closed forms.
    Everything else falls back to probability sums over the eight direction
    triples; the symmetric family has no such fallback and needs a symmetric
    game.
    """
    if not is_embedding(spec.local_rotors, _CANONICAL_KAPPA):
        raise PreconditionError("state rotors are incompatible with the canonical embedding")
    fam = spec.family
    if not is_symmetric(g):
        if isinstance(fam, GeneralSymmetric):
            raise NotSymmetricError("the symmetric state family needs a player-symmetric game")
        return payoff_function(spec, g)
    if isinstance(fam, GHZ):
        return ghz_payoff_fn(g, math.cos(fam.gamma))
    if isinstance(fam, GeneralSymmetric):
        return symmetric_payoff_fn(g, math.cos(fam.gamma), fam.phi, fam.delta)
    return payoff_function(spec, g)


def equilibria(spec: StateSpec, g: GameMatrix, tol: float = NE_TOL) -> list[NEResult]:
    """Corner equilibria plus, for symmetric games and states, the x = y = z ones.

    Embedding-compatible rotors are z-rotations that leave the canonical
    outcome statistics alone, so the diagonal analysis ignores them.
    """
    found = _corner_results(state_payoff_function(spec, g), tol)
    params = _symmetric_params(spec.family)
    if params is not None and is_symmetric(g):
        seen = {tuple(e.profile) for e in found}
        for ne in mixed_ne_symmetric(g, *params, tol=tol):
            if ne.profile is None or tuple(ne.profile) not in seen:
                found.append(ne)
    found.sort(key=NEResult.sort_key)
    return found


def _corner_results(payoff_fn, tol) -> list[NEResult]:
    out = []
    for corner in CORNERS:
        slack = _slack(corner, payoff_fn)
        if slack >= -tol:
            out.append(NEResult(StrategyProfile(*corner), payoff_fn(*corner), "pure-corner", slack))
    return out


def pure_ne_enumerate(spec: StateSpec, g: GameMatrix, tol: float = NE_TOL) -> list[NEResult]:
    """All corner equilibria in lexicographic order."""
    return _corner_results(state_payoff_function(spec, g), tol)


def _diagonal_quadratic(a: np.ndarray, cg: float, cp: float, cd: float) -> tuple[float, float, float]:
    """Coefficients of the diagonal stationarity condition in t = 2x - 1.

    Setting x = y = z in Alice's equilibrium bracket gives
    A t^2 + B t + C = 0; at phi = 0 this is
    cos(g) a111 t^2 + 2 a110 t + cos(g) a100 = 0 (times 6).
    """
    ghz = cg * (1 + cp)
    w = (1 - cp) * cd
    return (
        3 * a[1, 1, 1] * (ghz + w),
        4 * a[1, 1, 0] * (1 + 2 * cp),
        a[1, 0, 0] * (3 * ghz - w),
    )


def _quadratic_roots(A: float, B: float, C: float, scale: float):
    """Real roots, or None when the equation vanishes identically."""
    eps = 1e-12 * max(scale, 1.0)
    if abs(A) <= eps:
        if abs(B) <= eps:
            return None if abs(C) <= eps else []
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < -eps * max(abs(B), eps):
        return []
    if disc <= 0:
        return [-B / (2 * A)]
    root = math.sqrt(disc)
    q = -0.5 * (B + math.copysign(root, B)) if B != 0 else -0.5 * root
    return sorted({q / A, C / q} if q != 0 else {root / (2 * A), -root / (2 * A)})


def mixed_ne_symmetric(
    g: GameMatrix,
    gamma: float | None,
    phi: float = 0.0,
    delta: float = 0.0,
    *,
    cos_gamma: float | None = None,
    tol: float = NE_TOL,
) -> list[NEResult]:
    """Equilibria with x = y = z from the diagonal stationarity condition.

    ``phi = 0`` is the GHZ state.  Roots outside [0, 1] are dropped and the
    rest are confirmed with :func:`is_ne`.  When the condition vanishes for
    every x, a single ``continuum`` result stands for the whole diagonal.
    """
    if not is_symmetric(g):
        raise NotSymmetricError("symmetric mixed equilibria need a symmetric game")
    cg = math.cos(gamma) if cos_gamma is None else float(cos_gamma)
    cp, cd = math.cos(phi), math.cos(delta)
    co = coefficients(g)
    fn = _closed_form(g, cg, phi, delta)
    roots = _quadratic_roots(*_diagonal_quadratic(co.a, cg, cp, cd), scale=float(np.max(np.abs(co.a))))
    if roots is None:
        return [NEResult(None, fn(0.5, 0.5, 0.5), "continuum", _slack((0.5,) * 3, fn))]
    out = []
    for t in roots:
        x = (t + 1) / 2
        if -1e-12 <= x <= 1 + 1e-12:
            x = min(max(x, 0.0), 1.0)
            slack = _slack((x, x, x), fn)
            if slack >= -tol:
                out.append(NEResult(StrategyProfile(x, x, x), fn(x, x, x), _kind((x,)), slack))
    return out


def ne_condition_ghz(g: GameMatrix, gamma: float | None, s, *, cos_gamma: float | None = None):
    """Per-player equilibrium brackets on the GHZ state (any game).

    Player p's profile entry s_p is part of an equilibrium iff
    (s_p - s) * bracket_p >= 0 for every alternative s in [0, 1].
    """
    cg = math.cos(gamma) if cos_gamma is None else float(cos_gamma)
    co = coefficients(g)
    a, b, c = co.a, co.b, co.c
    X, Y, Z = (2 * float(v) - 1 for v in s)
    return (
        a[1, 1, 0] * Y + a[1, 0, 1] * Z + cg * (a[1, 0, 0] + a[1, 1, 1] * Y * Z),
        b[1, 1, 0] * X + b[0, 1, 1] * Z + cg * (b[0, 1, 0] + b[1, 1, 1] * X * Z),
        c[1, 0, 1] * X + c[0, 1, 1] * Y + cg * (c[0, 0, 1] + c[1, 1, 1] * X * Y),
    )


def ne_condition_general(g: GameMatrix, gamma: float | None, phi: float, delta: float, s, *, cos_gamma=None):
    """Per-player equilibrium brackets on the symmetric GHZ/W family.

    Each bracket is three times the derivative of that player's payoff with
    respect to their own strategy.
    """
    if not is_symmetric(g):
        raise NotSymmetricError("the symmetric-family brackets need a symmetric game")
    a = coefficients(g).a
    cg = math.cos(gamma) if cos_gamma is None else float(cos_gamma)
    cp, cd = math.cos(phi), math.cos(delta)
    s = [float(v) for v in s]
    out = []
    for p in range(3):
        o1, o2 = (s[q] for q in range(3) if q != p)
        u1 = 2 * a[1, 1, 0] * (o1 + o2 - 1)
        u2 = a[1, 1, 1] * (1 - 2 * o1) * (1 - 2 * o2)
        out.append(
            3 * (a[1, 0, 0] + u2) * cg * (1 + cp)
            + 2 * u1 * (1 + 2 * cp)
            - (a[1, 0, 0] - 3 * u2) * (1 - cp) * cd
        )
    return tuple(out)


def brackets_allow(s, brackets, tol: float = NE_TOL) -> bool:
    """Whether a profile satisfies (s_p - s) * bracket_p >= 0 for all players."""
    for v, br in zip(s, brackets):
        if v >= 1.0:
            ok = br >= -tol
        elif v <= 0.0:
            ok = br <= tol
        else:
            ok = abs(br) <= tol
        if not ok:
            return False
    return True


def pd_transition_threshold(phi: float, delta: float) -> float:
    """cos(gamma) below which (0,0,0) stops being an equilibrium of the PD."""
    cp, cd = math.cos(phi), math.cos(delta)
    if 1 + cp <= 1e-15:
        raise ValueError("threshold undefined at phi = pi (no GHZ component)")
    return (2 - cd) / 3 + (2 * cd - 1) / (3 * (1 + cp))


# -- sweeps -------------------------------------------------------------------

AXIS_NAMES = ("cos_gamma", "gamma", "phi", "delta")


@dataclass(frozen=True)
class Axis:
    """Inclusive grid ``start, start + step, ...`` not exceeding ``stop``."""

    name: str
    start: float
    stop: float
    step: float = 1.0

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if not all(math.isfinite(v) for v in (self.start, self.stop, self.step)):
            raise ValueError("axis bounds must be finite")
        if self.step <= 0:
            raise ValueError("axis step must be positive")
        if self.stop < self.start:
            raise ValueError(f"empty range for axis {self.name}: {self.start} > {self.stop}")
        lo, hi = (-1.0, 1.0) if self.name == "cos_gamma" else (0.0, math.pi)
        if self.start < lo - 1e-12 or self.stop > hi + 1e-12:
            raise ValueError(f"axis {self.name} must stay inside [{lo}, {hi}]")

    @classmethod
    def parse(cls, text: str) -> Axis:
        """``name=start:stop:step`` or ``name=value``."""
        name, sep, rng = text.partition("=")
        if not sep:
            raise ValueError(f"axis spec {text!r} lacks '='")
        parts = rng.split(":")
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"axis spec {text!r} has non-numeric bounds") from None
        if len(nums) == 1:
            return cls(name.strip(), nums[0], nums[0])
        if len(nums) == 3:
            return cls(name.strip(), *nums)
        raise ValueError(f"axis spec {text!r} must be name=start:stop:step or name=value")

    def values(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        vals = np.round(self.start + self.step * np.arange(count), 12)
        return vals + 0.0  # drop negative zeros


@dataclass(frozen=True)
class GridPoint:
    params: dict
    equilibria: tuple[NEResult, ...]

    def corner_set(self) -> frozenset:
        return frozenset(
            tuple(int(v) for v in e.profile) for e in self.equilibria if e.kind == "pure-corner"
        )


@dataclass(frozen=True)
class PhaseDiagram:
    family: str
    axes: tuple[Axis, ...]
    points: tuple[GridPoint, ...]

    @property
    def columns(self) -> list[str]:
        if self.family == "ghz":
            return [self.axes[0].name]
        return [self._gamma_axis, "phi", "delta"]

    @property
    def _gamma_axis(self) -> str:
        return next((a.name for a in self.axes if a.name in ("cos_gamma", "gamma")), "cos_gamma")

    def rows(self):
        for pt in self.points:
            for ne in pt.equilibria:
                yield [_fmt(pt.params[c]) for c in self.columns] + [ne.label] + [_fmt(v) for v in ne.payoffs]

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns + ["ne_set", "pi_A", "pi_B", "pi_C"])
        writer.writerows(self.rows())
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def to_json(self) -> str:
        doc = {
            "family": self.family,
            "axes": [{"name": a.name, "start": a.start, "stop": a.stop, "step": a.step} for a in self.axes],
            "points": [
                {
                    "params": {c: float(_fmt(pt.params[c])) for c in self.columns},
                    "equilibria": [
                        {
                            "ne": ne.label,
                            "kind": ne.kind,
                            "payoffs": [float(_fmt(v)) for v in ne.payoffs],
                            "margin": float(_fmt(ne.margin)),
                        }
                        for ne in pt.equilibria
                    ],
                }
                for pt in self.points
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    def transitions(self, axis: str | None = None):
        """Adjacent grid points along ``axis`` whose corner-equilibrium sets differ.

        Returns (params_before, params_after, set_before, set_after) tuples in
        grid order; the other parameters are held fixed between the pair.
        """
        axis = axis or self._gamma_axis
        others = [c for c in self.columns if c != axis]
        lines: dict[tuple, list[GridPoint]] = {}
        for pt in self.points:
            lines.setdefault(tuple(pt.params[c] for c in others), []).append(pt)
        out = []
        for line in lines.values():
            line.sort(key=lambda p: p.params[axis])
            for lo, hi in zip(line, line[1:]):
                if lo.corner_set() != hi.corner_set():
                    out.append((lo.params, hi.params, lo.corner_set(), hi.corner_set()))
        return out


def _grid_point(g: GameMatrix, params: dict, tol: float) -> GridPoint:
    cg = params["cos_gamma"] if "cos_gamma" in params else math.cos(params["gamma"])
    phi, delta = params.get("phi", 0.0), params.get("delta", 0.0)
    found = _corner_results(_closed_form(g, cg, phi, delta), tol)
    corners = {tuple(e.profile) for e in found}
    for ne in mixed_ne_symmetric(g, None, phi, delta, cos_gamma=cg, tol=tol):
        if ne.profile is None or tuple(ne.profile) not in corners:
            found.append(ne)
    found.sort(key=NEResult.sort_key)
    return GridPoint(params, tuple(found))


def _threads(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get("EPRGAMES_THREADS", "1")))
    except ValueError:
        return 1


def sweep(g: GameMatrix, family: str, axes, *, tol: float = NE_TOL, workers: int | None = None) -> PhaseDiagram:
    """Equilibria and payoffs on a grid of state parameters.

    ``family`` is ``"ghz"`` (one gamma axis) or ``"symmetric"`` (gamma, phi,
    delta; absent axes are fixed at 0).  Gamma may be given as ``gamma`` or
    ``cos_gamma``.  Output order is the grid order, whatever the worker count.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if not is_symmetric(g):
        raise NotSymmetricError("sweeps require a player-symmetric game")
    axes = [Axis.parse(a) if isinstance(a, str) else a for a in axes]
    by_name = {a.name: a for a in axes}
    if len(by_name) != len(axes):
        raise ValueError("duplicate axis")
    gamma_axes = [a for a in axes if a.name in ("cos_gamma", "gamma")]
    if len(gamma_axes) != 1:
        raise ValueError("exactly one of cos_gamma / gamma must be swept")
    if family == "ghz" and len(axes) != 1:
        raise ValueError("the ghz family only has a gamma axis")
    ordered = [gamma_axes[0]]
    if family == "symmetric":
        ordered += [by_name.get(n, Axis(n, 0.0, 0.0)) for n in ("phi", "delta")]
    names = [a.name for a in ordered]
    grid = [dict(zip(names, (float(v) for v in combo))) for combo in itertools.product(*(a.values() for a in ordered))]
    n = _threads(workers)
    if n == 1:
        points = [_grid_point(g, p, tol) for p in grid]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            points = list(pool.map(lambda p: _grid_point(g, p, tol), grid))
    return PhaseDiagram(family, tuple(ordered), tuple(points))


# -- payoff maximisation ------------------------------------------------------


@dataclass(frozen=True)
class MaxPayoffResult:
    value: float
    params: dict
    equilibrium: NEResult | None
    evaluations: int = field(default=0, compare=False)


def _best_equilibrium(g, params, player, tol):
    pt = _grid_point(g, params, tol)
    best = None
    for ne in pt.equilibria:
        if best is None or ne.payoffs[player] > best.payoffs[player]:
            best = ne
    return (best.payoffs[player] if best else -math.inf), best


def max_payoff_search(
    g: GameMatrix,
    family: str = "ghz",
    embedding=None,
    *,
    player: int = 0,
    points: int = 20,
    refine: bool = True,
    tol: float = NE_TOL,
) -> MaxPayoffResult:
    """Largest equilibrium payoff for ``player`` over the family's parameters.

    The candidate equilibria at each parameter point are the ones a sweep
    reports (corners and the symmetric mixed equilibria).  A ``points``-per-
    axis grid over [0, pi] in gamma (and phi, delta for ``"symmetric"``) is
    followed, if ``refine``, by repeated local zooms around the best point.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if embedding is not None and not is_embedding(embedding.rotors, _CANONICAL_KAPPA):
        raise PreconditionError("closed-form payoffs need the canonical detector angles")
    if not is_symmetric(g):
        raise NotSymmetricError("payoff search requires a player-symmetric game")
    names = ["gamma"] if family == "ghz" else ["gamma", "phi", "delta"]
    axis = np.linspace(0.0, math.pi, points)
    evals = 0

    def score(vals):
        nonlocal evals
        evals += 1
        return _best_equilibrium(g, dict(zip(names, vals)), player, tol)

    best_val, best_ne, best_at = -math.inf, None, None
    for combo in itertools.product(axis, repeat=len(names)):
        val, ne = score(combo)
        if val > best_val:
            best_val, best_ne, best_at = val, ne, combo
    half = math.pi / max(points - 1, 1)
    while refine and half > 1e-10:
        centre = best_at
        subs = [np.clip(np.linspace(c - half, c + half, 9), 0.0, math.pi) for c in centre]
        for combo in itertools.product(*subs):
            val, ne = score(combo)
            if val > best_val:
                best_val, best_ne, best_at = val, ne, combo
        half /= 4
    return MaxPayoffResult(best_val, dict(zip(names, (float(v) for v in best_at))), best_ne, evals)

"""Detector settings, overlap probabilities and outcome distributions.

Outcome bit 0 means the detector read +1, bit 1 means -1.  Each player owns
two detector angles; a run picks one of them per player (choice 1 or 2) and
the detector is the rotor exp(-kappa iota sigma_2 / 2) on that particle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .clifford import Multivector, bivector_exp, correlators, scalar_product
from .states import EulerRotor, StateSpec, basis_state, realize_state

__all__ = [
    "ClosedFormTerms",
    "ConsistencyError",
    "MeasurementConfig",
    "OUTCOMES",
    "OutcomeDistribution",
    "closed_form_terms",
    "distribution",
    "ghz_closed_form",
    "overlap_probability",
    "w_closed_form",
]

PROB_TOL = 1e-12
OUTCOMES = tuple(itertools.product((0, 1), repeat=3))


class ConsistencyError(ArithmeticError):
    """A probability left [0, 1] by more than floating-point noise."""


def _clamp(p: float) -> float:
    if p < -PROB_TOL or p > 1 + PROB_TOL:
        raise ConsistencyError(f"probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class MeasurementConfig:
    """Two detector angles per player plus the direction chosen this run."""

    kappa: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]
    choices: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        kappa = tuple(tuple(float(k) for k in pair) for pair in self.kappa)
        if len(kappa) != 3 or any(len(pair) != 2 for pair in kappa):
            raise ValueError("kappa must hold two angles for each of three players")
        if not all(math.isfinite(k) for pair in kappa for k in pair):
            raise ValueError("detector angles must be finite")
        choices = tuple(int(c) for c in self.choices)
        if len(choices) != 3 or any(c not in (1, 2) for c in choices):
            raise ValueError(f"direction choices must be 1 or 2, got {self.choices}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "choices", choices)

    @classmethod
    def uniform(cls, first: float, second: float, choices=(1, 1, 1)) -> MeasurementConfig:
        return cls(((first, second),) * 3, choices)

    def with_choices(self, i: int, j: int, k: int) -> MeasurementConfig:
        return MeasurementConfig(self.kappa, (i, j, k))

    @property
    def angles(self) -> tuple[float, float, float]:
        """The selected angle for each player."""
        return tuple(self.kappa[p][c - 1] for p, c in enumerate(self.choices))


@dataclass(frozen=True)
class OutcomeDistribution:
    """P[l, m, n] for the eight outcome triples."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(2, 2, 2)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __getitem__(self, lmn) -> float:
        if isinstance(lmn, str):
            lmn = tuple(int(ch) for ch in lmn)
        return float(self.probs[tuple(lmn)])

    @property
    def total(self) -> float:
        return float(self.probs.sum())

    def as_dict(self) -> dict[str, float]:
        return {f"{l}{m}{n}": float(self.probs[l, m, n]) for l, m, n in OUTCOMES}

    def flipped(self) -> OutcomeDistribution:
        """Relabel every outcome bit (l, m, n) -> (1-l, 1-m, 1-n)."""
        return OutcomeDistribution(self.probs[::-1, ::-1, ::-1])


def overlap_probability(psi: Multivector, phi: Multivector, n: int | None = None) -> float:
    """|<phi|psi>|^2 = 2^(n-2) [<psi E psi~ phi E phi~> - <psi J psi~ phi J phi~>]."""
    psi._same(phi)
    if n is not None and n != psi.n:
        raise ValueError(f"states live in a {psi.n}-particle algebra, not {n}")
    e, j = correlators(psi.n)
    rho_e, rho_j = psi * e * ~psi, psi * j * ~psi
    return _overlap(rho_e, rho_j, phi, e, j)


def _overlap(rho_e, rho_j, phi, e, j) -> float:
    n = phi.n
    raw = 2.0 ** (n - 2) * (scalar_product(rho_e, phi * e * ~phi) - scalar_product(rho_j, phi * j * ~phi))
    return _clamp(raw)


def _outcome_probs(psi: Multivector, angles) -> np.ndarray:
    e, j = correlators(3)
    rho_e, rho_j = psi * e * ~psi, psi * j * ~psi
    detectors = bivector_exp(1, 2, angles[0]) * bivector_exp(2, 2, angles[1]) * bivector_exp(3, 2, angles[2])
    probs = np.empty((2, 2, 2))
    for lmn in OUTCOMES:
        probs[lmn] = _overlap(rho_e, rho_j, detectors * basis_state(*lmn), e, j)
    return probs


def distribution(spec: StateSpec, cfg: MeasurementConfig) -> OutcomeDistribution:
    """Outcome probabilities from the algebraic overlap formula."""
    return OutcomeDistribution(_outcome_probs(realize_state(spec), cfg.angles))


@dataclass(frozen=True)
class ClosedFormTerms:
    X: float
    Y: float
    Z: float
    F: float
    G: float
    H: float
    U: float
    V: float
    W: float
    Theta: float


def _player_terms(rotor: EulerRotor, kappa: float) -> tuple[float, float, float]:
    t1, t2, t3 = rotor.angles
    ck, sk = math.cos(kappa), math.sin(kappa)
    c1, s1 = math.cos(t1), math.sin(t1)
    c2, s2 = math.cos(t2), math.sin(t2)
    c3, s3 = math.cos(t3), math.sin(t3)
    x = c1 * ck + c3 * s1 * sk
    f = -sk * (c1 * c2 * c3 - s2 * s3) + s1 * c2 * ck
    u = sk * (c2 * s3 + s2 * c3 * c1) - s1 * s2 * ck
    return x, f, u


def closed_form_terms(rotors, cfg: MeasurementConfig) -> ClosedFormTerms:
    """Rotor/detector combinations for the directions selected in ``cfg``."""
    (x, f, u), (y, g, v), (z, h, w) = (
        _player_terms(r, k) for r, k in zip(rotors, cfg.angles)
    )
    theta = f * v * w + u * g * w + u * v * h - f * g * h
    return ClosedFormTerms(x, y, z, f, g, h, u, v, w, theta)


def _signs(l, m, n):
    return (-1) ** l, (-1) ** m, (-1) ** n


def ghz_closed_form(gamma: float, rotors, cfg: MeasurementConfig) -> OutcomeDistribution:
    t = closed_form_terms(rotors, cfg)
    cg, sg = math.cos(gamma), math.sin(gamma)
    probs = np.empty((2, 2, 2))
    for lmn in OUTCOMES:
        sl, sm, sn = _signs(*lmn)
        probs[lmn] = _clamp(
            (
                1
                + cg * (sl * t.X + sm * t.Y + sn * t.Z)
                + sl * sm * t.X * t.Y
                + sl * sn * t.X * t.Z
                + sm * sn * t.Y * t.Z
                + sl * sm * sn * (cg * t.X * t.Y * t.Z + sg * t.Theta)
            )
            / 8
        )
    return OutcomeDistribution(probs)


def w_closed_form(rotors, cfg: MeasurementConfig) -> OutcomeDistribution:
    t = closed_form_terms(rotors, cfg)
    X, Y, Z, F, G, H, U, V, W = t.X, t.Y, t.Z, t.F, t.G, t.H, t.U, t.V, t.W
    three = 2 * (X * G * H + F * Y * H + F * G * Z + X * V * W + U * Y * W + U * V * Z) - 3 * X * Y * Z
    ab = 2 * F * G + 2 * U * V - X * Y
    ac = 2 * F * H + 2 * U * W - X * Z
    bc = 2 * G * H + 2 * V * W - Y * Z
    probs = np.empty((2, 2, 2))
    for lmn in OUTCOMES:
        sl, sm, sn = _signs(*lmn)
        probs[lmn] = _clamp(
            (3 + sl * X + sm * Y + sn * Z + sl * sm * sn * three + sl * sm * ab + sl * sn * ac + sm * sn * bc) / 24
        )
    return OutcomeDistribution(probs)

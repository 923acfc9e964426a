"""Three-player two-direction games: payoff matrices, sign-sum coefficients,
the classical embedding and the payoff relations.

A strategy x is the probability that a player picks their FIRST detector
direction.  Under the canonical embedding the first direction reads outcome
0 on |000>, so in the classical limit x = 1 selects the outcome-0 row of the
game matrix for that player.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .measurement import MeasurementConfig, closed_form_terms, distribution
from .states import IDENTITY_ROTORS, EulerRotor, StateSpec

__all__ = [
    "EmbeddingConfig",
    "GameFileError",
    "GameMatrix",
    "NotSymmetricError",
    "PayoffCoefficients",
    "StrategyProfile",
    "canonical_embedding",
    "coefficients",
    "is_embedding",
    "is_symmetric",
    "payoff_classical_symmetric",
    "payoff_function",
    "payoff_general",
    "payoff_general_symmetric_closed",
    "payoff_ghz_closed",
    "payoff_mixed",
    "payoff_w_closed",
    "ghz_payoff_fn",
    "symmetric_payoff_fn",
    "prisoners_dilemma",
    "pure_choice_payoffs",
]

SYMMETRY_TOL = 1e-12
EMBEDDING_TOL = 1e-12
OUTCOME_KEYS = tuple(f"{l}{m}{n}" for l, m, n in itertools.product((0, 1), repeat=3))
_SIGN = np.array([[1.0, 1.0], [1.0, -1.0]])


class GameFileError(ValueError):
    pass


class NotSymmetricError(ValueError):
    """A closed form that assumes a player-symmetric game got an asymmetric one."""


@dataclass(frozen=True)
class GameMatrix:
    """payoffs[l, m, n, p]: payoff to player p (0=A, 1=B, 2=C) on outcome lmn."""

    payoffs: np.ndarray

    def __post_init__(self):
        g = np.array(self.payoffs, dtype=float)
        if g.shape != (2, 2, 2, 3):
            raise GameFileError(f"game matrix must have shape (2, 2, 2, 3), got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise GameFileError("game payoffs must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "payoffs", g)

    @classmethod
    def from_dict(cls, doc: dict) -> GameMatrix:
        if not isinstance(doc, dict):
            raise GameFileError("game document must be a JSON object")
        if doc.get("players", 3) != 3:
            raise GameFileError(f"only three-player games are supported, got players={doc.get('players')!r}")
        table = doc.get("payoffs")
        if not isinstance(table, dict):
            raise GameFileError("missing 'payoffs' object")
        if set(table) != set(OUTCOME_KEYS):
            missing = sorted(set(OUTCOME_KEYS) - set(table))
            extra = sorted(set(table) - set(OUTCOME_KEYS))
            raise GameFileError(f"payoff keys must be the eight 3-bit strings (missing {missing}, unexpected {extra})")
        g = np.empty((2, 2, 2, 3))
        for key in OUTCOME_KEYS:
            entry = table[key]
            if (
                not isinstance(entry, list)
                or len(entry) != 3
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            ):
                raise GameFileError(f"payoff {key!r} must be a list of three numbers")
            g[tuple(int(ch) for ch in key)] = entry
        return cls(g)

    @classmethod
    def from_json(cls, path) -> GameMatrix:
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise GameFileError(f"{path}: malformed JSON ({exc})") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "players": 3,
            "payoffs": {k: [float(v) for v in self.payoffs[tuple(int(ch) for ch in k)]] for k in OUTCOME_KEYS},
        }

    def player(self, p: int) -> np.ndarray:
        return self.payoffs[..., p]

    @classmethod
    def constant(cls, value: float) -> GameMatrix:
        return cls(np.full((2, 2, 2, 3), float(value)))


def prisoners_dilemma() -> GameMatrix:
    """The three-player Prisoners' Dilemma shipped with the package."""
    text = resources.files("eprgames").joinpath("data/pd.json").read_text()
    return GameMatrix.from_dict(json.loads(text))


@dataclass(frozen=True)
class PayoffCoefficients:
    """values[p, i, j, k]: a_ijk (p=0), b_ijk (p=1), c_ijk (p=2)."""

    values: np.ndarray

    @property
    def a(self) -> np.ndarray:
        return self.values[0]

    @property
    def b(self) -> np.ndarray:
        return self.values[1]

    @property
    def c(self) -> np.ndarray:
        return self.values[2]

    def reconstruct(self) -> np.ndarray:
        """Invert the sign sums: G_lmn = sum_ijk (-1)^(il+jm+kn) a_ijk."""
        return np.einsum("li,mj,nk,pijk->lmnp", _SIGN, _SIGN, _SIGN, self.values)

    def scaled(self, factor: float) -> PayoffCoefficients:
        return PayoffCoefficients(self.values * factor)

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {
            name: {k: float(self.values[p][tuple(int(ch) for ch in k)]) for k in OUTCOME_KEYS}
            for p, name in enumerate("abc")
        }


def coefficients(g: GameMatrix) -> PayoffCoefficients:
    """a_ijk = (1/8) sum_lmn (-1)^(il+jm+kn) G^A_lmn, likewise b and c."""
    return PayoffCoefficients(np.einsum("il,jm,kn,lmnp->pijk", _SIGN, _SIGN, _SIGN, g.payoffs) / 8)


def _symmetry_groups(co: PayoffCoefficients):
    a, b, c = co.a, co.b, co.c
    return [
        (a[1, 1, 1], b[1, 1, 1], c[1, 1, 1]),
        (a[0, 0, 0], b[0, 0, 0], c[0, 0, 0]),
        (a[1, 1, 0], b[1, 1, 0], a[1, 0, 1], c[1, 0, 1], b[0, 1, 1], c[0, 1, 1]),
        (b[1, 0, 0], c[1, 0, 0], a[0, 1, 0], c[0, 1, 0], a[0, 0, 1], b[0, 0, 1]),
        (a[1, 0, 0], b[0, 1, 0], c[0, 0, 1]),
        (a[0, 1, 1], b[1, 0, 1], c[1, 1, 0]),
    ]


def is_symmetric(g: GameMatrix, tol: float = SYMMETRY_TOL) -> bool:
    co = coefficients(g)
    return all(max(grp) - min(grp) <= tol for grp in _symmetry_groups(co))


def _require_symmetric(g: GameMatrix) -> PayoffCoefficients:
    if not is_symmetric(g):
        raise NotSymmetricError("this closed form only holds for player-symmetric games")
    return coefficients(g)


@dataclass(frozen=True)
class StrategyProfile:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"strategy {name} = {v} outside [0, 1]")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def replace(self, player: int, value: float) -> StrategyProfile:
        vals = list(self)
        vals[player] = value
        return StrategyProfile(*vals)


def _xyz(s) -> tuple[float, float, float]:
    x, y, z = (float(v) for v in s)
    return x, y, z


def is_embedding(rotors, kappa, tol: float = EMBEDDING_TOL) -> bool:
    """Do these rotors and detector angles reproduce the classical game?

    Requires the first direction to read +1 and the second -1 on |000> for
    every player, and Theta_ijk = 0 for all eight direction triples.
    """
    cfg = MeasurementConfig(kappa)
    for i, j, k in itertools.product((1, 2), repeat=3):
        t = closed_form_terms(rotors, cfg.with_choices(i, j, k))
        want = [1.0 if c == 1 else -1.0 for c in (i, j, k)]
        if max(abs(t.X - want[0]), abs(t.Y - want[1]), abs(t.Z - want[2]), abs(t.Theta)) > tol:
            return False
    return True


@dataclass(frozen=True)
class EmbeddingConfig:
    rotors: tuple[EulerRotor, EulerRotor, EulerRotor] = field(default=IDENTITY_ROTORS)
    kappa: tuple = ((0.0, math.pi),) * 3

    def __post_init__(self):
        object.__setattr__(self, "rotors", tuple(self.rotors))
        object.__setattr__(self, "kappa", MeasurementConfig(self.kappa).kappa)
        if not is_embedding(self.rotors, self.kappa):
            raise ValueError("rotors and detector angles do not embed the classical game")

    def measurement(self, choices=(1, 1, 1)) -> MeasurementConfig:
        return MeasurementConfig(self.kappa, choices)

    def state(self, family) -> StateSpec:
        return StateSpec(family, self.rotors)


def canonical_embedding() -> EmbeddingConfig:
    """Identity rotors with detector directions 0 and pi for every player."""
    return EmbeddingConfig()


def payoff_general(spec: StateSpec, cfg: MeasurementConfig, g: GameMatrix) -> tuple[float, float, float]:
    """Expected payoffs for one direction triple: sum_lmn G^P_lmn P_lmn."""
    p = distribution(spec, cfg).probs
    return tuple(float(np.sum(g.player(i) * p)) for i in range(3))


def _kappa(cfg) -> tuple:
    return cfg.kappa


def pure_choice_payoffs(spec: StateSpec, cfg, g: GameMatrix) -> np.ndarray:
    """table[i-1, j-1, k-1, p] = payoff to player p when the players pick i, j, k."""
    base = MeasurementConfig(_kappa(cfg))
    table = np.empty((2, 2, 2, 3))
    for i, j, k in itertools.product((1, 2), repeat=3):
        table[i - 1, j - 1, k - 1] = payoff_general(spec, base.with_choices(i, j, k), g)
    return table


def _mix(table: np.ndarray, x: float, y: float, z: float) -> tuple[float, float, float]:
    wx, wy, wz = (x, 1 - x), (y, 1 - y), (z, 1 - z)
    return tuple(float(v) for v in np.einsum("i,j,k,ijkp->p", wx, wy, wz, table))


def payoff_mixed(spec: StateSpec, cfg, g: GameMatrix, s) -> tuple[float, float, float]:
    """Payoffs when each player picks their first direction with probability x, y, z.

    ``cfg`` is a MeasurementConfig or EmbeddingConfig; only its detector
    angles are used, the state's own rotors stay in ``spec``.
    """
    return _mix(pure_choice_payoffs(spec, cfg, g), *_xyz(s))


def payoff_function(spec: StateSpec, g: GameMatrix, cfg=None):
    """(x, y, z) -> payoffs via probability sums, with the eight direction
    triples evaluated once up front."""
    table = pure_choice_payoffs(spec, cfg or canonical_embedding(), g)
    return lambda x, y, z: _mix(table, x, y, z)


def _ghz_alice(a: np.ndarray, g000: float, g111: float, cg: float, x: float, y: float, z: float) -> float:
    return 0.5 * (
        g000
        + g111
        - cg * (g000 - g111)
        - 4 * (y + z) * (a[1, 1, 0] + a[0, 1, 1])
        + cg * (4 * x * (a[1, 1, 1] + a[1, 0, 0]) + 4 * (a[1, 1, 1] + a[0, 0, 1]) * (y + z))
        + 8 * x * a[1, 1, 0] * (y + z - 1)
        + 8 * y * z * a[0, 1, 1]
        - 8 * a[1, 1, 1] * cg * (x * y + x * z + y * z - 2 * x * y * z)
    )


def ghz_payoff_fn(g: GameMatrix, cos_gamma: float):
    """(x, y, z) -> payoffs on the GHZ state; symmetry is checked once here."""
    co = _require_symmetric(g)
    ga = g.player(0)
    args = (co.a, float(ga[0, 0, 0]), float(ga[1, 1, 1]), float(cos_gamma))

    def fn(x, y, z):
        return (_ghz_alice(*args, x, y, z), _ghz_alice(*args, y, x, z), _ghz_alice(*args, z, x, y))

    return fn


def payoff_ghz_closed(g: GameMatrix, gamma: float | None, s, *, cos_gamma: float | None = None):
    """Mixed-strategy payoffs on the GHZ state under the canonical embedding."""
    cg = math.cos(gamma) if cos_gamma is None else float(cos_gamma)
    return ghz_payoff_fn(g, cg)(*_xyz(s))


def payoff_classical_symmetric(g: GameMatrix, s) -> float:
    """Alice's payoff in the classical mixed game, written with sign-sum coefficients.

    Valid for symmetric games; matches the GHZ closed form at gamma = 0.
    """
    a = _require_symmetric(g).a
    G = g.player(0)
    x, y, z = _xyz(s)
    return (
        G[1, 1, 1]
        + x * (G[0, 1, 1] - G[1, 1, 1])
        + y * (G[1, 1, 0] - G[1, 1, 1])
        + z * (G[1, 1, 0] - G[1, 1, 1])
        + 4 * x * y * (a[1, 1, 0] - a[1, 1, 1])
        + 4 * x * z * (a[1, 1, 0] - a[1, 1, 1])
        + 4 * y * z * (a[0, 1, 1] - a[1, 1, 1])
        + 8 * x * y * z * a[1, 1, 1]
    )


def payoff_w_closed(g: GameMatrix, rotors, cfg: MeasurementConfig) -> tuple[float, float, float]:
    """Pure-strategy payoffs on the W state for the direction triple in ``cfg``."""
    t = closed_form_terms(rotors, cfg)
    X, Y, Z, F, G, H, U, V, W = t.X, t.Y, t.Z, t.F, t.G, t.H, t.U, t.V, t.W
    terms = {
        (0, 0, 0): 3.0,
        (1, 0, 0): X,
        (0, 1, 0): Y,
        (0, 0, 1): Z,
        (0, 1, 1): 2 * G * H + 2 * V * W - Y * Z,
        (1, 1, 0): 2 * F * G + 2 * U * V - X * Y,
        (1, 0, 1): 2 * F * H + 2 * U * W - X * Z,
        (1, 1, 1): 2 * (X * G * H + F * Y * H + F * G * Z + X * V * W + U * Y * W + U * V * Z) - 3 * X * Y * Z,
    }
    scaled = coefficients(g).scaled(1 / 3).values
    return tuple(float(sum(scaled[p][idx] * v for idx, v in terms.items())) for p in range(3))


def _symmetric_payoff(a: np.ndarray, cg: float, cp: float, cd: float, x: float, y: float, z: float) -> float:
    X, Y, Z = 1 - 2 * x, 1 - 2 * y, 1 - 2 * z
    v1 = a[1, 0, 0] * X + a[0, 1, 0] * Y + a[0, 0, 1] * Z
    v2 = a[1, 1, 0] * X * Y + a[1, 0, 1] * X * Z + a[0, 1, 1] * Y * Z
    v3 = a[1, 1, 1] * X * Y * Z
    return (
        a[0, 0, 0]
        - 0.5 * (v1 + v3) * cg * (1 + cp)
        + v2 * (1 + 2 * cp) / 3
        + (v1 - 3 * v3) * (1 - cp) * cd / 6
    )


def payoff_general_symmetric_closed(
    g: GameMatrix, gamma: float | None, phi: float, delta: float, s, *, cos_gamma: float | None = None
):
    """Mixed-strategy payoffs on the symmetric GHZ/W superposition under the
    canonical embedding; each player uses their own coefficients."""
    cg = math.cos(gamma) if cos_gamma is None else float(cos_gamma)
    return symmetric_payoff_fn(g, cg, phi, delta)(*_xyz(s))


def symmetric_payoff_fn(g: GameMatrix, cos_gamma: float, phi: float, delta: float):
    """(x, y, z) -> payoffs on the symmetric family; symmetry is checked once here."""
    vals = _require_symmetric(g).values
    cg, cp, cd = float(cos_gamma), math.cos(phi), math.cos(delta)

    def fn(x, y, z):
        return tuple(_symmetric_payoff(vals[p], cg, cp, cd, x, y, z) for p in range(3))

    return fn

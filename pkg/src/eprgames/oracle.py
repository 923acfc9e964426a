"""Independent complex-vector reference for the outcome distributions.

States are built directly as kets in C^8 (qubit 1 is the most significant
bit), local unitaries come from matrix exponentials, and probabilities are
squared amplitudes.  Nothing here touches the Clifford-algebra engine, so
the two implementations can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import measurement
from .games import GameMatrix
from .measurement import MeasurementConfig, OutcomeDistribution
from .states import (
    GHZ,
    W,
    EulerRotor,
    GeneralPure,
    GeneralSymmetric,
    InvertedW,
    StateSpec,
)

__all__ = [
    "CrossValidationReport",
    "LocalUnitary",
    "cross_validate",
    "family_ket",
    "ket_distribution",
    "oracle_distribution",
    "phase_invariance_check",
    "random_trial",
    "symmetric_ket",
]

PAULI = {
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}
_W_KETS = (4, 2, 1)
_WBAR_KETS = (3, 5, 6)


def rotation(axis: int, angle: float) -> np.ndarray:
    """exp(-i angle sigma_axis / 2)."""
    return expm(-0.5j * angle * PAULI[axis])


@dataclass(frozen=True)
class LocalUnitary:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2) or not np.allclose(m.conj().T @ m, np.eye(2), atol=1e-12):
            raise ValueError("local unitary must be a 2x2 unitary matrix")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def euler(cls, theta1: float, theta2: float, theta3: float) -> LocalUnitary:
        return cls(rotation(3, theta3) @ rotation(2, theta1) @ rotation(3, theta2))

    @classmethod
    def from_rotor(cls, rotor: EulerRotor) -> LocalUnitary:
        return cls.euler(*rotor.angles)


def _kron3(a, b, c) -> np.ndarray:
    return np.kron(np.kron(a, b), c)


def symmetric_ket(rho, phases=None) -> np.ndarray:
    """sum_k rho_k e^{i phase} over the basis kets of Hamming weight k."""
    rho = np.asarray(rho, dtype=float)
    ph = np.zeros(8) if phases is None else np.asarray(phases, dtype=float)
    if ph.shape == (4,):
        ph = np.array([ph[bin(i).count("1")] for i in range(8)])
    ket = np.array([rho[bin(i).count("1")] for i in range(8)], dtype=complex)
    return ket * np.exp(1j * ph)


def family_ket(family) -> np.ndarray:
    """Ket of a state family before any local rotation."""
    ket = np.zeros(8, dtype=complex)
    if isinstance(family, GHZ):
        ket[0], ket[7] = math.cos(family.gamma / 2), math.sin(family.gamma / 2)
    elif isinstance(family, W):
        ket[list(_W_KETS)] = 1 / math.sqrt(3)
    elif isinstance(family, InvertedW):
        ket[list(_WBAR_KETS)] = 1 / math.sqrt(3)
    elif isinstance(family, GeneralSymmetric):
        g2, f2, d2 = family.gamma / 2, family.phi / 2, family.delta / 2
        r3 = math.sqrt(3)
        ket = symmetric_ket(
            [
                math.cos(g2) * math.cos(f2),
                -math.sin(f2) * math.sin(d2) / r3,
                math.sin(f2) * math.cos(d2) / r3,
                -math.sin(g2) * math.cos(f2),
            ]
        )
    elif isinstance(family, GeneralPure):
        l0, l1, l2, l3, l4 = family.lambdas
        ket[0b000] = l0
        ket[0b100] = l1 * np.exp(1j * family.phase)
        ket[0b101] = l2
        ket[0b110] = l3
        ket[0b111] = l4
    else:
        raise TypeError(f"unknown state family {family!r}")
    return ket


def state_ket(spec: StateSpec) -> np.ndarray:
    us = [LocalUnitary.from_rotor(r).matrix for r in spec.local_rotors]
    return _kron3(*us) @ family_ket(spec.family)


def ket_distribution(ket: np.ndarray, angles) -> OutcomeDistribution:
    """|<lmn| (K x L x M)^dagger |psi>|^2 for detectors exp(-i kappa sigma_2 / 2)."""
    det = _kron3(*(rotation(2, k) for k in angles))
    amps = det.conj().T @ np.asarray(ket, dtype=complex)
    return OutcomeDistribution((np.abs(amps) ** 2).reshape(2, 2, 2))


def oracle_distribution(spec: StateSpec, cfg: MeasurementConfig) -> OutcomeDistribution:
    return ket_distribution(state_ket(spec), cfg.angles)


def phase_invariance_check(rho, phases, g: GameMatrix, profiles) -> float:
    """Largest payoff change from attaching the given phases to a symmetric state.

    Payoffs use the canonical detector angles; ``profiles`` are mixed
    strategy triples.  Returns the max absolute difference over players and
    profiles.
    """
    kappa = ((0.0, math.pi),) * 3
    base_ket = symmetric_ket(rho)
    phased = symmetric_ket(rho, phases)
    table = np.empty((2, 2, 2, 2, 3))
    for t, ket in enumerate((base_ket, phased)):
        for i in (0, 1):
            for j in (0, 1):
                for k in (0, 1):
                    angles = (kappa[0][i], kappa[1][j], kappa[2][k])
                    p = ket_distribution(ket, angles).probs
                    table[t, i, j, k] = np.einsum("lmn,lmnp->p", p, g.payoffs)
    worst = 0.0
    for s in profiles:
        w = [np.array([v, 1 - v]) for v in map(float, s)]
        vals = np.einsum("i,j,k,tijkp->tp", *w, table)
        worst = max(worst, float(np.max(np.abs(vals[0] - vals[1]))))
    return worst


# -- randomized cross-checks --------------------------------------------------


def _random_family(rng: np.random.Generator):
    kind = rng.integers(5)
    if kind == 0:
        return GHZ(rng.uniform(0, math.pi))
    if kind == 1:
        return W()
    if kind == 2:
        return InvertedW()
    if kind == 3:
        return GeneralSymmetric(*rng.uniform(0, math.pi, 3))
    lam = rng.normal(size=5)
    lam[1] = abs(lam[1])
    lam /= np.linalg.norm(lam)
    # renormalize once more so float error stays far below the validation bound
    lam /= math.sqrt(float(np.sum(lam * lam)))
    return GeneralPure(tuple(lam), rng.uniform(0, math.pi))


def random_trial(rng: np.random.Generator) -> tuple[StateSpec, MeasurementConfig]:
    """A random family, random local rotors and random detector settings."""
    family = _random_family(rng)
    rotors = tuple(EulerRotor(*rng.uniform(-math.pi, math.pi, 3)) for _ in range(3))
    kappa = tuple(tuple(rng.uniform(-math.pi, math.pi, 2)) for _ in range(3))
    choices = tuple(int(c) for c in rng.integers(1, 3, size=3))
    return StateSpec(family, rotors), MeasurementConfig(kappa, choices)


@dataclass(frozen=True)
class CrossValidationReport:
    trials: int
    seed: int
    max_deviation: float
    max_normalization_error: float
    worst_trial: int

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_deviation <= tol and self.max_normalization_error <= tol


def cross_validate(trials: int = 1000, seed: int = 0, distribution_fn=None) -> CrossValidationReport:
    """Compare the algebraic engine with this module on random configurations.

    ``distribution_fn(spec, cfg)`` defaults to the engine's
    ``measurement.distribution``, looked up at call time.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    engine = distribution_fn or measurement.distribution
    rng = np.random.default_rng(seed)
    worst, worst_norm, worst_at = 0.0, 0.0, 0
    for t in range(trials):
        spec, cfg = random_trial(rng)
        got = engine(spec, cfg)
        ref = oracle_distribution(spec, cfg)
        dev = float(np.max(np.abs(got.probs - ref.probs)))
        if dev > worst:
            worst, worst_at = dev, t
        worst_norm = max(worst_norm, abs(got.total - 1.0))
    return CrossValidationReport(trials, seed, worst, worst_norm, worst_at)

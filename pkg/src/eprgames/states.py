"""Rotors, the single-qubit spinor mapping and the shared three-qubit states.

Kets map onto the algebra through |0> <-> 1 and |1> <-> -iota sigma_2, one
factor per particle, so every state here is a product of per-particle rotors
applied on the left of a fixed core element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .clifford import _ISIGMA, Multivector, bivector_exp, get_algebra

__all__ = [
    "EulerRotor",
    "GHZ",
    "GeneralPure",
    "GeneralSymmetric",
    "IDENTITY_ROTORS",
    "InvertedW",
    "Spinor",
    "StateSpec",
    "W",
    "basis_state",
    "mv_to_spinor",
    "realize_state",
    "rho_to_angles",
    "spinor_to_mv",
]

NORM_TOL = 1e-12
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class EulerRotor:
    """R = exp(-theta3 i s3 / 2) exp(-theta1 i s2 / 2) exp(-theta2 i s3 / 2)."""

    theta1: float = 0.0
    theta2: float = 0.0
    theta3: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(t) for t in self.angles):
            raise ValueError(f"rotor angles must be finite, got {self.angles}")

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.theta1, self.theta2, self.theta3)

    def multivector(self, particle: int = 1, n: int = 3) -> Multivector:
        return (
            bivector_exp(particle, 3, self.theta3, n)
            * bivector_exp(particle, 2, self.theta1, n)
            * bivector_exp(particle, 3, self.theta2, n)
        )

    @property
    def is_identity(self) -> bool:
        return self.angles == (0.0, 0.0, 0.0)


IDENTITY_ROTORS = (EulerRotor(), EulerRotor(), EulerRotor())


@dataclass(frozen=True)
class Spinor:
    """Real components of one qubit: a0 + i a3 on |0>, -a2 + i a1 on |1>."""

    a0: float
    a1: float
    a2: float
    a3: float

    def ket(self) -> np.ndarray:
        return np.array([self.a0 + 1j * self.a3, -self.a2 + 1j * self.a1])

    @classmethod
    def from_ket(cls, alpha: complex, beta: complex) -> Spinor:
        alpha, beta = complex(alpha), complex(beta)
        return cls(alpha.real, beta.imag, -beta.real, alpha.imag)


def spinor_to_mv(s: Spinor) -> Multivector:
    alg = get_algebra(1)
    return (
        alg.scalar(s.a0)
        + alg.isigma(1, 1) * s.a1
        + alg.isigma(1, 2) * s.a2
        + alg.isigma(1, 3) * s.a3
    )


def mv_to_spinor(mv: Multivector) -> Spinor:
    if mv.n != 1:
        raise ValueError("spinors live in the single-particle algebra")
    c = mv.coefficients
    comps = [c[0]]
    used = [0]
    for axis in (1, 2, 3):
        mask, sign = _ISIGMA[axis]
        comps.append(sign * c[mask])
        used.append(mask)
    rest = np.delete(c, used)
    if np.any(np.abs(rest) > 1e-12):
        raise ValueError("multivector has components outside the spinor subspace")
    return Spinor(*(float(v) for v in comps))


def basis_state(l: int, m: int, n: int) -> Multivector:
    """Computational basis state |l m n> as a three-particle element."""
    alg = get_algebra(3)
    out = alg.scalar(1.0)
    for particle, bit in enumerate((l, m, n), start=1):
        if bit not in (0, 1):
            raise ValueError(f"basis bits must be 0 or 1, got {(l, m, n)}")
        if bit:
            out = out * -alg.isigma(particle, 2)
    return out


def _check_angle(name: str, value: float) -> float:
    value = float(value)
    if not -_ANGLE_SLACK <= value <= math.pi + _ANGLE_SLACK:
        raise ValueError(f"{name} = {value} outside [0, pi]")
    return value


@dataclass(frozen=True)
class GHZ:
    gamma: float

    def __post_init__(self):
        _check_angle("gamma", self.gamma)


@dataclass(frozen=True)
class W:
    pass


@dataclass(frozen=True)
class InvertedW:
    pass


@dataclass(frozen=True)
class GeneralSymmetric:
    """Symmetric superposition of GHZ and both W-type terms.

    phi = 0 is the GHZ family, phi = pi the W-type states mixed by delta.
    """

    gamma: float
    phi: float
    delta: float

    def __post_init__(self):
        for name in ("gamma", "phi", "delta"):
            _check_angle(name, getattr(self, name))


@dataclass(frozen=True)
class GeneralPure:
    """l0|000> + l1 e^{i phase}|100> + l2|101> + l3|110> + l4|111>."""

    lambdas: tuple[float, float, float, float, float]
    phase: float = 0.0

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if len(lam) != 5:
            raise ValueError("GeneralPure needs five amplitudes")
        if abs(sum(v * v for v in lam) - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized: sum of squares = {sum(v * v for v in lam)!r}")
        if lam[1] < 0:
            raise ValueError("lambda_1 must be non-negative")
        _check_angle("phase", self.phase)


Family = Union[GHZ, W, InvertedW, GeneralSymmetric, GeneralPure]


@dataclass(frozen=True)
class StateSpec:
    family: Family
    local_rotors: tuple[EulerRotor, EulerRotor, EulerRotor] = field(default=IDENTITY_ROTORS)

    def __post_init__(self):
        rotors = tuple(self.local_rotors)
        if len(rotors) != 3 or not all(isinstance(r, EulerRotor) for r in rotors):
            raise ValueError("local_rotors must be three EulerRotor instances")
        object.__setattr__(self, "local_rotors", rotors)

    def with_rotors(self, rotors) -> StateSpec:
        return StateSpec(self.family, tuple(rotors))


def _core(family: Family) -> Multivector:
    alg = get_algebra(3)
    one = alg.scalar(1.0)
    s = [alg.isigma(p, 2) for p in (1, 2, 3)]
    pairs = s[0] * s[1] + s[1] * s[2] + s[0] * s[2]
    triple = s[0] * s[1] * s[2]
    root3 = math.sqrt(3.0)
    match family:
        case GHZ(gamma=g):
            return one * math.cos(g / 2) - triple * math.sin(g / 2)
        case W():
            return (s[0] + s[1] + s[2]) * (-1.0 / root3)
        case InvertedW():
            return pairs * (1.0 / root3)
        case GeneralSymmetric(gamma=g, phi=f, delta=d):
            cf, sf = math.cos(f / 2), math.sin(f / 2)
            return (
                one * (math.cos(g / 2) * cf)
                + (s[0] + s[1] + s[2]) * (sf * math.sin(d / 2) / root3)
                + pairs * (sf * math.cos(d / 2) / root3)
                + triple * (math.sin(g / 2) * cf)
            )
        case GeneralPure(lambdas=lam, phase=x):
            return (
                one * lam[0]
                - s[0] * (lam[1] * math.cos(x))
                + alg.isigma(1, 1) * (lam[1] * math.sin(x))
                + s[0] * s[2] * lam[2]
                + s[0] * s[1] * lam[3]
                - triple * lam[4]
            )
    raise TypeError(f"unknown state family {family!r}")


def realize_state(spec: StateSpec) -> Multivector:
    """psi = A B C (core), with the local rotors acting on particles 1, 2, 3."""
    psi = _core(spec.family)
    for particle in (3, 2, 1):
        rotor = spec.local_rotors[particle - 1]
        if not rotor.is_identity:
            psi = rotor.multivector(particle) * psi
    return psi


def rho_to_angles(rho0: float, rho1: float, rho2: float, rho3: float) -> tuple[float, float, float]:
    """(gamma, phi, delta) for the symmetric state with per-ket weights rho_i.

    The state is rho0|000> + rho1(|001>+|010>+|100>) + rho2(|011>+|101>+|110>)
    + rho3|111>; only the magnitudes fix the angles, signs are discarded.
    """
    r = np.abs([rho0, rho1, rho2, rho3], dtype=float)
    norm = r[0] ** 2 + 3 * r[1] ** 2 + 3 * r[2] ** 2 + r[3] ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"rho violates normalization: rho0^2 + 3 rho1^2 + 3 rho2^2 + rho3^2 = {norm!r}")
    ghz_weight = math.hypot(r[0], r[3])
    w_weight = math.sqrt(3.0) * math.hypot(r[1], r[2])
    phi = 2 * math.atan2(w_weight, ghz_weight)
    gamma = 2 * math.atan2(r[3], r[0]) if ghz_weight > 0 else 0.0
    delta = 2 * math.atan2(r[1], r[2]) if w_weight > 0 else 0.0
    return gamma, phi, delta

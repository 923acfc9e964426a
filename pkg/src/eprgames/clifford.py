"""Real multiparticle Clifford algebra Cl(3,0) tensored N times (N = 1, 2, 3).

Each particle carries its own copy of the Pauli algebra generated by
sigma_1, sigma_2, sigma_3.  A blade is described by one 3-bit mask per
particle (bit ``b`` set iff sigma_{b+1} of that particle is a factor) and the
dense coefficient index is the concatenation of those masks, particle 1 in
the lowest bits.  Factors that belong to different particles commute.

Particles and axes are numbered from 1, as in sigma_k^p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from numbers import Real

import numpy as np

__all__ = [
    "Blade",
    "CliffordAlgebra",
    "DimensionError",
    "Multivector",
    "bivector_exp",
    "correlators",
    "geometric_product",
    "get_algebra",
    "reversion",
    "scalar_part",
]

MAX_PARTICLES = 3

# sigma_1 sigma_2 sigma_3 times sigma_k, as (mask, sign):
# i s1 = s2 s3,  i s2 = s3 s1 = -s1 s3,  i s3 = s1 s2
_ISIGMA = {1: (0b110, 1), 2: (0b101, -1), 3: (0b011, 1)}


class DimensionError(ValueError):
    """Raised when elements of algebras with different particle counts meet."""


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _reorder_sign(a: int, b: int) -> int:
    """Sign of the Euclidean product of single-particle blades ``a`` and ``b``."""
    a >>= 1
    swaps = 0
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


_SINGLE_SIGN = np.array([[_reorder_sign(a, b) for b in range(8)] for a in range(8)], dtype=np.int8)
_SINGLE_REV = np.array([(-1) ** (g * (g - 1) // 2) for g in map(_popcount, range(8))], dtype=np.int8)


@dataclass(frozen=True)
class Blade:
    """Product of basis vectors, one 3-bit mask per particle."""

    masks: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= len(self.masks) <= MAX_PARTICLES:
            raise DimensionError(f"unsupported particle count {len(self.masks)}")
        for m in self.masks:
            if not 0 <= m <= 7:
                raise ValueError(f"blade mask {m} outside [0, 7]")

    @classmethod
    def from_index(cls, index: int, n: int) -> Blade:
        return cls(tuple((index >> (3 * p)) & 7 for p in range(n)))

    @property
    def n(self) -> int:
        return len(self.masks)

    @property
    def index(self) -> int:
        return sum(m << (3 * p) for p, m in enumerate(self.masks))

    def grade(self, particle: int) -> int:
        return _popcount(self.masks[particle - 1])

    @property
    def label(self) -> str:
        parts = []
        for p, m in enumerate(self.masks, start=1):
            if m:
                axes = "".join(str(b + 1) for b in range(3) if m >> b & 1)
                parts.append(f"e{axes}^{p}")
        return " ".join(parts) or "1"


class CliffordAlgebra:
    """Sign and reversion tables for an ``n``-particle algebra.

    Use :func:`get_algebra` rather than constructing this directly so that
    elements built in different places share one instance.
    """

    def __init__(self, n: int):
        if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_PARTICLES:
            raise DimensionError(f"particle count must be 1, 2 or 3, got {n!r}")
        self.n = int(n)
        self.dim = 8**self.n
        idx = np.arange(self.dim)
        masks = [(idx >> (3 * p)) & 7 for p in range(self.n)]
        sign = np.ones((self.dim, self.dim), dtype=np.int8)
        rev = np.ones(self.dim, dtype=np.int8)
        for m in masks:
            sign *= _SINGLE_SIGN[m[:, None], m[None, :]]
            rev *= _SINGLE_REV[m]
        sign.setflags(write=False)
        rev.setflags(write=False)
        self.sign = sign
        self.reversion_sign = rev
        # <e_i e_j>_0 is nonzero only for i == j, where it equals this sign
        self.square_sign = np.ascontiguousarray(np.diagonal(sign)).astype(float)

    def __repr__(self):
        return f"CliffordAlgebra(n={self.n})"

    def __reduce__(self):
        return (get_algebra, (self.n,))

    # -- element constructors -------------------------------------------------

    def zero(self) -> Multivector:
        return Multivector(self, np.zeros(self.dim))

    def scalar(self, value: float) -> Multivector:
        c = np.zeros(self.dim)
        c[0] = value
        return Multivector(self, c)

    def blade(self, blade: Blade | int, coefficient: float = 1.0) -> Multivector:
        if isinstance(blade, Blade):
            if blade.n != self.n:
                raise DimensionError(f"blade for {blade.n} particles in {self.n}-particle algebra")
            index = blade.index
        else:
            index = int(blade)
        c = np.zeros(self.dim)
        c[index] = coefficient
        return Multivector(self, c)

    def _single(self, particle: int, mask: int, coefficient: float = 1.0) -> Multivector:
        if not 1 <= particle <= self.n:
            raise ValueError(f"particle {particle} outside 1..{self.n}")
        return self.blade(mask << (3 * (particle - 1)), coefficient)

    def vector(self, particle: int, axis: int) -> Multivector:
        """sigma_axis of the given particle."""
        _check_axis(axis)
        return self._single(particle, 1 << (axis - 1))

    def pseudoscalar(self, particle: int) -> Multivector:
        """iota = sigma_1 sigma_2 sigma_3 of the given particle."""
        return self._single(particle, 0b111)

    def isigma(self, particle: int, axis: int) -> Multivector:
        """The bivector iota sigma_axis of the given particle."""
        _check_axis(axis)
        mask, sign = _ISIGMA[axis]
        return self._single(particle, mask, float(sign))

    def from_blades(self, terms: dict[Blade, float]) -> Multivector:
        c = np.zeros(self.dim)
        for b, v in terms.items():
            c[b.index] += v
        return Multivector(self, c)


def _check_axis(axis: int) -> None:
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")


@lru_cache(maxsize=None)
def get_algebra(n: int) -> CliffordAlgebra:
    return CliffordAlgebra(n)


class Multivector:
    """Immutable element of an ``n``-particle algebra with real coefficients.

    ``a * b`` is the geometric product (or scaling when one side is a real
    number), ``~a`` the reversion.
    """

    __slots__ = ("algebra", "_c")

    def __init__(self, algebra: CliffordAlgebra, coefficients):
        c = np.array(coefficients, dtype=float)
        if c.shape != (algebra.dim,):
            raise DimensionError(f"expected {algebra.dim} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("multivector coefficients must be finite")
        c.setflags(write=False)
        self.algebra = algebra
        self._c = c

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def n(self) -> int:
        return self.algebra.n

    def __getitem__(self, blade: Blade | int) -> float:
        index = blade.index if isinstance(blade, Blade) else blade
        return float(self._c[index])

    def terms(self, atol: float = 0.0) -> dict[Blade, float]:
        return {
            Blade.from_index(int(i), self.n): float(self._c[i])
            for i in np.flatnonzero(np.abs(self._c) > atol)
        }

    def __repr__(self):
        terms = self.terms(atol=1e-15)
        if not terms:
            return f"Multivector(n={self.n}, 0)"
        body = " + ".join(f"{v:.6g}*{b.label}" if b.index else f"{v:.6g}" for b, v in terms.items())
        return f"Multivector(n={self.n}, {body})"

    def _same(self, other: Multivector) -> None:
        if other.algebra is not self.algebra and other.algebra.n != self.algebra.n:
            raise DimensionError(f"cannot combine {self.n}- and {other.n}-particle elements")

    def __add__(self, other):
        if isinstance(other, Real):
            return self + self.algebra.scalar(float(other))
        if not isinstance(other, Multivector):
            return NotImplemented
        self._same(other)
        return Multivector(self.algebra, self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Real):
            return self + (-float(other))
        if not isinstance(other, Multivector):
            return NotImplemented
        self._same(other)
        return Multivector(self.algebra, self._c - other._c)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.algebra, -self._c)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Multivector(self.algebra, self._c * float(other))
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Multivector(self.algebra, self._c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Multivector(self.algebra, self._c / float(other))
        return NotImplemented

    def __invert__(self):
        return reversion(self)

    def allclose(self, other: Multivector, atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self._c - other._c), initial=0.0) <= atol)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    a._same(b)
    alg = a.algebra
    ia = np.flatnonzero(a._c)
    ib = np.flatnonzero(b._c)
    if ia.size == 0 or ib.size == 0:
        return alg.zero()
    target = ia[:, None] ^ ib[None, :]
    weights = alg.sign[ia[:, None], ib[None, :]] * np.outer(a._c[ia], b._c[ib])
    out = np.bincount(target.ravel(), weights=weights.ravel(), minlength=alg.dim)
    return Multivector(alg, out)


def reversion(a: Multivector) -> Multivector:
    return Multivector(a.algebra, a._c * a.algebra.reversion_sign)


def scalar_part(a: Multivector) -> float:
    return float(a._c[0])


def scalar_product(a: Multivector, b: Multivector) -> float:
    """``scalar_part(a * b)`` without forming the full product."""
    a._same(b)
    return float(np.dot(a._c * a.algebra.square_sign, b._c))


@lru_cache(maxsize=None)
def correlators(n: int) -> tuple[Multivector, Multivector]:
    """The pair (E, J) that ties the per-particle complex structures together.

    E = prod_{i=2..n} (1 - iota sigma_3^1 iota sigma_3^i) / 2 and J = E iota sigma_3^1.
    """
    alg = get_algebra(n)
    e = alg.scalar(1.0)
    is3 = alg.isigma(1, 3)
    for i in range(2, n + 1):
        e = e * ((1.0 - is3 * alg.isigma(i, 3)) * 0.5)
    return e, e * is3


def bivector_exp(particle: int, axis: int, angle: float, n: int = 3) -> Multivector:
    """Unit rotor exp(-angle iota sigma_axis / 2) acting on one particle."""
    alg = get_algebra(n)
    return alg.scalar(np.cos(angle / 2)) - alg.isigma(particle, axis) * np.sin(angle / 2)

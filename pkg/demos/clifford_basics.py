"""Multiparticle Clifford algebra: blades, products, rotors and correlators."""

import math

from eprgames import bivector_exp, correlators, get_algebra

alg = get_algebra(3)
s1, s2 = alg.vector(1, 1), alg.vector(1, 2)

print("sigma1 sigma2 =", s1 * s2)
print("sigma2 sigma1 =", s2 * s1)
# vectors on different particles commute
print("commute across particles:", (alg.vector(1, 1) * alg.vector(2, 2)).allclose(alg.vector(2, 2) * alg.vector(1, 1)))

r = bivector_exp(1, 2, 0.8)
print("rotor R =", r)
print("R ~R == 1:", (r * ~r).allclose(alg.scalar(1.0)))

e, j = correlators(3)
print("E idempotent:", (e * e).allclose(e))
print("J^2 == -E:", (j * j).allclose(-e))

# quarter turn about z rotates sigma1 into sigma2
q = bivector_exp(1, 3, math.pi / 2)
print("R s1 ~R =", q * s1 * ~q)

"""Exact q-numbers over Q(q, z) and evaluation at rational points."""
from shapoform.cli import pretty
from shapoform.scalars import AffineExponent, phi, q_int, z

lam = AffineExponent(0, (1,))  # (lambda, alpha_1), so that q^lam = z1
x = q_int(lam) * q_int(lam - 2)
print("[z][z-2]       =", x)
print("phi(lam)       =", phi(lam))
print("[6] / [3]      =", pretty(q_int(6) / q_int(3)))
print("[lam] at q=2, z1=4:", q_int(lam).specialize(2, (4,)))
print("z1^2 - 1 over z1 - 1 =", (z(1) ** 2 - 1) / (z(1) - 1))

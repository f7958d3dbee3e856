"""Build a fermionic lattice algebra and inspect its structure.

Covers: generator relations, parity unitaries, the even/odd grading,
monomial bases of region subalgebras, and the relative commutant identity
that makes the union of two disjoint regions factorize as a tensor product.
"""

import numpy as np

from carentropy import (
    Region,
    build_context,
    grade_split,
    monomial_basis,
    parity_unitary,
    relative_commutant_check,
    theta,
)

ctx = build_context(3)
print(f"lattice: {ctx.n} sites, algebra dimension {ctx.dim}x{ctx.dim}")

# Anticommutation relations hold exactly in this realization.
a1, a2 = ctx.annihilator(1), ctx.annihilator(2)
print("{a1, a2}            :", np.abs(a1 @ a2 + a2 @ a1).max())
print("{a1*, a1} - 1       :", np.abs(a1.conj().T @ a1 + a1 @ a1.conj().T - np.eye(8)).max())

# The parity unitary of a region flips its generators and fixes the rest.
v1 = parity_unitary(ctx, Region((1,))).matrix
print("v1 a1 v1 + a1       :", np.abs(v1 @ a1 @ v1 + a1).max())
print("v1 a2 v1 - a2       :", np.abs(v1 @ a2 @ v1 - a2).max())

# The grading negates every generator; even/odd parts split any element.
print("Theta(a1) + a1      :", np.abs(theta(ctx, a1) + a1).max())
even, odd = grade_split(ctx, a1 + a1.conj().T @ a1)
print("odd part is a1      :", np.abs(odd - a1).max())

# Region subalgebras carry an orthogonal monomial basis, half even half odd.
basis = monomial_basis(ctx, Region((1, 3)))
print(f"basis of A(1,3)     : {len(basis)} monomials")

# Commutant of A(I) inside A(I u J): even part of A(J) plus v_I times its
# odd part.  The check verifies commutation, dimension, and (here) the
# from-scratch nullspace dimension.
check = relative_commutant_check(ctx, Region((1,)), Region((2, 3)))
print("commutant dimension :", check.candidate_dim, "expected", check.expected_dim)
print("largest commutator  :", check.generator_residual)
print("nullspace dimension :", check.nullspace_dim)
print("verdict             :", "ok" if check.ok else "FAILED")

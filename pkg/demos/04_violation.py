"""The explicit inequality violation, one region at a time.

Regions I, K, J in a row.  A maximally odd pure state on K is jointly
extended with the symmetrized version of a second maximally odd pure state
on I; the extension is pure on K u I but its marginal on I is tracial.
Taking the product with the tracial state on J gives a state whose
triangle gap on (I, K) and monotonicity-form gap on (I, J; K) both equal
-ln 2, while strong subadditivity still holds.
"""

import numpy as np

from carentropy import Region, build_context, violation_demo

ctx = build_context(3)
K, I, J = Region((2,)), Region((1,)), Region((3,))

report = violation_demo(ctx, K, I, J)

print("entropies (nats):")
for name in ("K", "I", "J", "KI", "KJ", "KIJ"):
    print(f"  S({name:<3}) = {report.entropies[name]: .12f}")

print("\ngaps:")
print(f"  triangle  on (I, K)    = {report.triangle_gap: .12f}   (-ln 2 = {-np.log(2):.12f})")
print(f"  mono-ssa  on (I, J; K) = {report.mono_ssa_gap: .12f}")
print(f"  ssa       on (KI, KJ)  = {report.ssa_gap: .3e}")

print("\nverdicts:", report.verdicts)
print("construction residuals:", {k: f"{v:.2e}" for k, v in report.residuals.items()})

print("\nreading: S(I) + S(J) = 2 ln 2 exceeds S(KI) + S(KJ) = ln 2, so adding")
print("the region K *decreased* the entropy sum; and |S(I) - S(K)| = ln 2 > 0")
print("= S(KI), so the pure state on K u I has genuinely asymmetric marginals.")

"""Reproduce the summary truth table for the three inequalities.

Random campaigns establish the positive cells (SSA for everything,
triangle and MONO-SSA for even states); the explicit construction
establishes the negative ones.  The same table is available from the CLI:
``carentropy table1 --trials 200 --seed 7``.
"""

import numpy as np

from carentropy import (
    Region,
    build_context,
    mono_ssa_gap,
    random_state,
    ssa_gap,
    triangle_gap,
    violation_demo,
)

ctx = build_context(3)
full = ctx.lattice
I, J, K = Region((1,)), Region((2,)), Region((3,))
TRIALS = 300

worst = {"ssa_any": -np.inf, "tri_even": np.inf, "mono_even": np.inf}
for seed in range(TRIALS):
    any_parity = random_state(ctx, full, seed=seed)
    even = random_state(ctx, full, even=True, seed=seed)
    worst["ssa_any"] = max(worst["ssa_any"], ssa_gap(any_parity, Region((1, 2)), Region((2, 3))))
    worst["tri_even"] = min(worst["tri_even"], triangle_gap(even, I, J.union(K)))
    worst["mono_even"] = min(worst["mono_even"], mono_ssa_gap(even, I, J, K))

demo = violation_demo(ctx, K, I, J)

print(f"over {TRIALS} random states (worst case):")
print(f"  ssa gap, any parity        : {worst['ssa_any']: .3e}   (holds iff <= 0)")
print(f"  triangle gap, even states  : {worst['tri_even']: .3e}   (holds iff >= 0)")
print(f"  mono-ssa gap, even states  : {worst['mono_even']: .3e}   (holds iff >= 0)")
print(f"explicit noneven construction:")
print(f"  triangle gap               : {demo.triangle_gap: .6f}")
print(f"  mono-ssa gap               : {demo.mono_ssa_gap: .6f}")
print(f"  ssa gap on the same state  : {demo.ssa_gap: .3e}")

print()
print("Property    tensor-style expectation    CAR lattice")
print("SSA         holds                       holds")
print("Triangle    holds                       violated in general, holds for even states")
print("MONO-SSA    holds                       violated in general, holds for even states")

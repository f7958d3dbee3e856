"""Entropy inequality gaps, monotonicity, mixing bounds, commuting square.

Gap conventions (all entropies in nats, computed from restrictions of one
state ``phi``):

* ``ssa_gap(phi, I, J)      = S(I u J) - S(I) - S(J) + S(I n J)``
  (strong subadditivity asks for ``<= 0``; it holds for *every* state of a
  CAR lattice, even or not).
* ``triangle_gap(phi, I, J) = S(I u J) - |S(I) - S(J)|`` for disjoint
  regions (negative means the triangle inequality is violated).
* ``mono_ssa_gap(phi, I, J, K) = S(K u I) + S(K u J) - S(I) - S(J)`` for
  mutually disjoint regions (negative means violation; nonnegativity is
  the monotonicity of ``K -> S(K u I) + S(K u J)``).

Both of the latter hold for every even state and can fail for noneven
states; entropy over the empty region is 0 (the trivial subalgebra has a
unique state).

Verdicts separate float noise from genuine violations: a gap on the good
side of ``-1e-9`` "holds", one below ``-1e-6`` is "violated", the band in
between is "indeterminate" (constructed violations are O(ln 2), far from
the band).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .car_algebra import Region
from .states import State, entropy, is_even, restrict

__all__ = [
    "HOLD_TOL",
    "VIOLATION_TOL",
    "InequalityReport",
    "MixingBoundsReport",
    "CommutingSquareReport",
    "classify_gap",
    "ssa_gap",
    "triangle_gap",
    "mono_ssa_gap",
    "monotonicity_curve",
    "mixing_bounds_check",
    "commuting_square_check",
    "inequality_report",
]

HOLD_TOL = 1e-9
VIOLATION_TOL = 1e-6


def classify_gap(
    kind: str, gap: float, hold_tol: float = HOLD_TOL, violation_tol: float = VIOLATION_TOL
) -> str:
    """Map a gap value to ``holds`` / ``violated`` / ``indeterminate``.

    ``ssa`` holds on the nonpositive side; ``triangle`` and ``mono_ssa``
    hold on the nonnegative side.
    """
    signed = -gap if kind == "ssa" else gap
    if signed >= -hold_tol:
        return "holds"
    if signed < -violation_tol:
        return "violated"
    return "indeterminate"


def _contained(state: State, region: Region, name: str) -> None:
    if not region.issubset(state.region):
        raise ValueError(f"region {name}={region.sites} not contained in {state.region.sites}")


def ssa_gap(state: State, I: Region, J: Region) -> float:
    """Strong subadditivity gap; overlap between ``I`` and ``J`` is allowed."""
    _contained(state, I, "I")
    _contained(state, J, "J")
    union, inter = I.union(J), I.intersection(J)
    s_inter = entropy(restrict(state, inter)) if inter.sites else 0.0
    return entropy(restrict(state, union)) - entropy(restrict(state, I)) - entropy(
        restrict(state, J)
    ) + s_inter


def triangle_gap(state: State, I: Region, J: Region) -> float:
    """Triangle gap for disjoint regions; negative means violation."""
    _contained(state, I, "I")
    _contained(state, J, "J")
    if not I.isdisjoint(J):
        raise ValueError(f"triangle inequality needs disjoint regions, got {I.sites}, {J.sites}")
    return entropy(restrict(state, I.union(J))) - abs(
        entropy(restrict(state, I)) - entropy(restrict(state, J))
    )


def mono_ssa_gap(state: State, I: Region, J: Region, K: Region) -> float:
    """Monotonicity-form gap for mutually disjoint I, J, K; negative = violation."""
    for name, region in (("I", I), ("J", J), ("K", K)):
        _contained(state, region, name)
    if not (I.isdisjoint(J) and I.isdisjoint(K) and J.isdisjoint(K)):
        raise ValueError("regions I, J, K must be mutually disjoint")
    return (
        entropy(restrict(state, K.union(I)))
        + entropy(restrict(state, K.union(J)))
        - entropy(restrict(state, I))
        - entropy(restrict(state, J))
    )


def monotonicity_curve(
    state: State, I: Region, J: Region, chain: list[Region]
) -> list[float]:
    """Values of ``K -> S(K u I) + S(K u J)`` along a nested chain of K's."""
    previous: Region | None = None
    for K in chain:
        _contained(state, K, "K")
        if not (K.isdisjoint(I) and K.isdisjoint(J)):
            raise ValueError(f"chain element {K.sites} overlaps I or J")
        if previous is not None and not previous.issubset(K):
            raise ValueError(f"chain is not nested at {K.sites}")
        previous = K
    return [
        entropy(restrict(state, K.union(I))) + entropy(restrict(state, K.union(J)))
        for K in chain
    ]


@dataclass(frozen=True)
class MixingBoundsReport:
    """Slacks of the two mixing bounds for ``lam * phi + (1 - lam) * psi``.

    ``concavity_slack = S(mix) - lam S(phi) - (1-lam) S(psi) >= 0`` and
    ``convexity_slack = lam S(phi) + (1-lam) S(psi) + h(lam) - S(mix) >= 0``
    with ``h`` the binary entropy of the mixing weight.
    """

    lam: float
    mixture_entropy: float
    concavity_slack: float
    convexity_slack: float
    tolerance: float = HOLD_TOL

    @property
    def ok(self) -> bool:
        return self.concavity_slack >= -self.tolerance and self.convexity_slack >= -self.tolerance


def mixing_bounds_check(phi: State, psi: State, lam: float) -> MixingBoundsReport:
    """Check concavity and the mixing upper bound for the convex combination."""
    if phi.region != psi.region:
        raise ValueError("mixing requires a common region")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must be in [0, 1], got {lam}")
    mixture = State(phi.ctx, phi.region, lam * phi.rep + (1.0 - lam) * psi.rep)
    s_mix = entropy(mixture)
    avg = lam * entropy(phi) + (1.0 - lam) * entropy(psi)
    h = 0.0
    for w in (lam, 1.0 - lam):
        if w > 0.0:
            h -= w * np.log(w)
    return MixingBoundsReport(
        lam=lam,
        mixture_entropy=s_mix,
        concavity_slack=s_mix - avg,
        convexity_slack=avg + h - s_mix,
    )


@dataclass(frozen=True)
class CommutingSquareReport:
    """Residuals of the conditional-expectation compatibility identities.

    On random elements ``x`` of ``A(I u J)``:
    ``E_I E_J x = E_{I n J} x``, ``E_J E_I x = E_{I n J} x``, and
    ``E_{I n J} E_I x = E_{I n J} x``; plus the state-level counterpart
    ``restrict(restrict(phi, I), I n J) = restrict(phi, I n J)``.
    """

    I: Region
    J: Region
    trials: int
    operator_residual: float
    state_residual: float
    tolerance: float = 1e-10

    @property
    def ok(self) -> bool:
        return self.operator_residual <= self.tolerance and self.state_residual <= self.tolerance


def commuting_square_check(
    state: State, I: Region, J: Region, *, trials: int = 8, seed=0
) -> CommutingSquareReport:
    """Verify the commuting-square property on operators and on the state."""
    _contained(state, I, "I")
    _contained(state, J, "J")
    ctx = state.ctx
    inter = I.intersection(J)
    union = I.union(J)
    b_union = ctx.basis(union.sites)
    e_i = ctx.basis(I.sites).expect
    e_j = ctx.basis(J.sites).expect
    e_inter = ctx.basis(inter.sites).expect

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        c = rng.normal(size=b_union.size) + 1j * rng.normal(size=b_union.size)
        x = (c @ b_union.flat).reshape(ctx.dim, ctx.dim)
        target = e_inter(x)
        for y in (e_i(e_j(x)), e_j(e_i(x)), e_inter(e_i(x)), e_inter(e_j(x))):
            worst = max(worst, float(np.abs(y - target).max()))

    s_target = restrict(state, inter)
    s_resid = 0.0
    for mid in (I, J):
        two_step = restrict(restrict(state, mid), inter)
        s_resid = max(s_resid, float(np.abs(two_step.rep - s_target.rep).max()))

    return CommutingSquareReport(
        I=I, J=J, trials=trials, operator_residual=worst, state_residual=s_resid
    )


@dataclass(frozen=True)
class InequalityReport:
    """Named gaps, verdicts and parity metadata for one tested state."""

    regions: dict[str, tuple[int, ...]]
    even_state: bool
    tolerance: float = HOLD_TOL
    violation_tolerance: float = VIOLATION_TOL
    ssa_gap: float | None = None
    triangle_gap: float | None = None
    mono_ssa_gap: float | None = None
    verdicts: dict[str, str] = field(default_factory=dict)
    entropies: dict[str, float] | None = None
    residuals: dict[str, float] | None = None


def inequality_report(
    state: State,
    I: Region,
    J: Region,
    K: Region | None = None,
    *,
    hold_tol: float = HOLD_TOL,
    violation_tol: float = VIOLATION_TOL,
) -> InequalityReport:
    """Evaluate all applicable gaps of one state for the given regions.

    SSA is always evaluated on (I, J).  The triangle gap needs disjoint I,
    J and is skipped otherwise.  The monotonicity-form gap needs a third
    mutually disjoint region K.
    """
    gaps: dict[str, float | None] = {"ssa": ssa_gap(state, I, J)}
    gaps["triangle"] = triangle_gap(state, I, J) if I.isdisjoint(J) else None
    if K is not None and I.isdisjoint(J) and K.isdisjoint(I) and K.isdisjoint(J):
        gaps["mono_ssa"] = mono_ssa_gap(state, I, J, K)
    else:
        gaps["mono_ssa"] = None
    verdicts = {
        kind: classify_gap(kind, gap, hold_tol, violation_tol)
        for kind, gap in gaps.items()
        if gap is not None
    }
    regions = {"I": I.sites, "J": J.sites}
    if K is not None:
        regions["K"] = K.sites
    return InequalityReport(
        regions=regions,
        even_state=is_even(state),
        tolerance=hold_tol,
        violation_tolerance=violation_tol,
        ssa_gap=gaps["ssa"],
        triangle_gap=gaps["triangle"],
        mono_ssa_gap=gaps["mono_ssa"],
        verdicts=verdicts,
    )

"""Noneven joint extensions that break the triangle and monotonicity bounds.

The construction takes three mutually disjoint regions K, I, J:

* ``rho1`` on K: a *maximally odd* pure state (oddness quantifier
  ``p_theta = 0``), e.g. the vector state of an eigenvector ``eta`` of an
  odd self-adjoint element such as ``a_k + a_k*``.  Then ``eta`` is
  orthogonal to ``v_K eta`` and the grading flips the state to the vector
  state of ``v_K eta``.
* ``rho2_tilde`` on I: any state with ``rho2_tilde != rho2_tilde o Theta``;
  its grading-symmetrized average ``rho2 = (rho2_tilde + rho2_tilde o
  Theta) / 2`` is even and has strictly larger entropy.
* the joint extension ``psi`` of ``rho1`` and ``rho2`` on ``A(K u I)``
  evaluated monomial-wise as

      psi(A1 A2) = rho1(A1) rho2(A2_even)
                   + rho1(A1 u1) rho2_tilde(A2_odd),

  with ``u1 = v_K`` the self-adjoint unitary implementing the grading on
  ``A(K)`` (for a pure state of a full matrix algebra the GNS
  representation is the defining one, so the GNS extension of ``rho1`` is
  just ``<eta, . eta>`` and ``rho1(u1) = <eta, v_K eta> = 0``).  The
  density is reconstructed from these functional values over the
  tracially orthogonal monomial basis of ``A(K u I)``, then validated as
  positive and normalized.  The entropy of ``psi`` equals the entropy of
  ``rho2_tilde`` (not of ``rho2``), which is what breaks the inequalities.

* ``rhoJ`` on J: an arbitrary even state; the full demo state is the
  product extension ``psi o rhoJ``.

With one site per region, ``rho2_tilde`` maximally odd pure, and ``rhoJ``
tracial, the demo state has ``S(K) = S(K u I) = 0``,
``S(I) = S(J) = S(K u J) = ln 2``, so both the triangle gap on (I, K) and
the monotonicity-form gap on (I, J; K) equal ``-ln 2`` while strong
subadditivity still holds on the same state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .car_algebra import AlgebraContext, OperatorElement, Region, parity_unitary
from .errors import ExtensionError
from .inequalities import (
    HOLD_TOL,
    InequalityReport,
    classify_gap,
    mono_ssa_gap,
    ssa_gap,
    triangle_gap,
)
from .states import (
    State,
    density_distance,
    entropy,
    is_even,
    p_theta,
    product_extension,
    restrict,
    state_from_tau_form,
    tracial_state,
    vector_state,
)

__all__ = [
    "ExtensionRecipe",
    "odd_eigenvector_state",
    "symmetrize",
    "u1_for",
    "build_recipe",
    "joint_extension",
    "violation_demo",
]

P_THETA_TOL = 1e-8
PURITY_TOL = 1e-10


def odd_eigenvector_state(
    ctx: AlgebraContext,
    K: Region,
    operator: OperatorElement | np.ndarray | None = None,
) -> State:
    """Vector state of an eigenvector of an odd self-adjoint element of ``A(K)``.

    Defaults to ``a_k + a_k*`` for the first site ``k`` of ``K`` and its
    largest eigenvalue (+1).  The result is pure, noneven, and maximally
    odd: any eigenvector with nonzero eigenvalue is orthogonal to its
    parity image, so ``p_theta = 0``.
    """
    ctx.check_region(K)
    if not K.sites:
        raise ValueError("K must be nonempty")
    basis = ctx.basis(K.sites)
    if operator is None:
        k = K.sites[0]
        mat = ctx.annihilator(k) + ctx.creator(k)
    else:
        mat = operator.matrix if isinstance(operator, OperatorElement) else np.asarray(operator)
        if np.abs(mat - mat.conj().T).max() > 1e-10:
            raise ValueError("operator must be self-adjoint")
        if np.abs(mat + ctx.theta_of(mat)).max() > 1e-10:
            raise ValueError("operator must be odd")
        if basis.membership_residual(mat) > 1e-10 * max(1.0, float(np.linalg.norm(mat))):
            raise ValueError(f"operator does not belong to the region {K.sites}")

    local = basis.to_local(mat)
    lam, u = np.linalg.eigh(local)
    top = int(np.argmax(lam))
    if abs(lam[top]) <= 1e-8:
        raise ValueError("chosen eigenvalue is zero; the parity image would not be orthogonal")
    vec = u[:, top]
    k_big = int(np.argmax(np.abs(vec)))
    vec = vec * (vec[k_big] / abs(vec[k_big])).conj()
    return vector_state(ctx, K, vec)


def symmetrize(state: State) -> State:
    """Grading-symmetrized average ``(phi + phi o Theta) / 2``; always even."""
    rep = (state.rep + state.ctx.theta_of(state.rep)) / 2.0
    return State(state.ctx, state.region, rep)


def u1_for(ctx: AlgebraContext, K: Region, rho1: State) -> OperatorElement:
    """Self-adjoint unitary implementing the grading on ``A(K)``.

    For a pure state of the full matrix algebra ``A(K)`` the defining
    representation is the GNS one, and the region parity unitary ``v_K``
    (an even element of ``A(K)``) does the job; the phase freedom is fixed
    by this canonical choice.
    """
    if rho1.region != K:
        raise ValueError("rho1 must live on K")
    if entropy(rho1) > PURITY_TOL:
        raise ValueError("u1 is defined here for pure states only")
    return parity_unitary(ctx, K)


@dataclass(frozen=True)
class ExtensionRecipe:
    """Ingredients of the joint extension and the violation demo."""

    K: Region
    I: Region
    rho1: State
    rho2_tilde: State
    rho2: State
    u1: OperatorElement
    J: Region | None = None
    rhoJ: State | None = None


def _validate_recipe(ctx: AlgebraContext, recipe: ExtensionRecipe) -> None:
    if not recipe.K.isdisjoint(recipe.I):
        raise ValueError("K and I must be disjoint")
    if p_theta(recipe.rho1) > P_THETA_TOL:
        raise ValueError(
            "rho1 must be maximally odd (p_theta = 0); the functional formula "
            "is not a state extension otherwise"
        )
    if entropy(recipe.rho1) > PURITY_TOL:
        raise ValueError("rho1 must be pure")
    if not is_even(recipe.rho2):
        raise ValueError("rho2 must be even")
    if density_distance(recipe.rho2_tilde, recipe.rho2_tilde.theta_image()) <= 1e-6:
        raise ValueError("rho2_tilde must differ from its parity image")
    u1 = recipe.u1.matrix
    if np.abs(u1 - u1.conj().T).max() > 1e-10 or np.abs(u1 @ u1 - np.eye(ctx.dim)).max() > 1e-10:
        raise ValueError("u1 must be a self-adjoint unitary")
    bK = ctx.basis(recipe.K.sites)
    conj = np.einsum("ij,njk,kl->nil", u1, bK.mats, u1)
    flipped = bK.mats * bK.parity[:, None, None]
    if np.abs(conj - flipped).max() > 1e-10:
        raise ValueError("u1 does not implement the grading on A(K)")
    if recipe.J is not None:
        for other, name in ((recipe.K, "K"), (recipe.I, "I")):
            if not recipe.J.isdisjoint(other):
                raise ValueError(f"J must be disjoint from {name}")
    if recipe.rhoJ is not None and not is_even(recipe.rhoJ):
        raise ExtensionError("rhoJ must be even for the product extension to exist")


def build_recipe(
    ctx: AlgebraContext,
    K: Region,
    I: Region,
    *,
    rho2_tilde: State | None = None,
    J: Region | None = None,
    rhoJ: State | None = None,
    validate: bool = True,
) -> ExtensionRecipe:
    """Assemble (and validate) the default or a customized recipe."""
    ctx.check_region(K)
    ctx.check_region(I)
    rho1 = odd_eigenvector_state(ctx, K)
    if rho2_tilde is None:
        rho2_tilde = odd_eigenvector_state(ctx, I)
    elif rho2_tilde.region != I:
        raise ValueError(f"rho2_tilde lives on {rho2_tilde.region.sites}, expected {I.sites}")
    rho2 = symmetrize(rho2_tilde)
    if J is not None and rhoJ is None:
        rhoJ = tracial_state(ctx, J)
    if rhoJ is not None and J is not None and rhoJ.region != J:
        raise ValueError(f"rhoJ lives on {rhoJ.region.sites}, expected {J.sites}")
    recipe = ExtensionRecipe(
        K=K, I=I, rho1=rho1, rho2_tilde=rho2_tilde, rho2=rho2,
        u1=u1_for(ctx, K, rho1), J=J, rhoJ=rhoJ,
    )
    if validate:
        _validate_recipe(ctx, recipe)
    return recipe


def joint_extension(recipe: ExtensionRecipe) -> State:
    """The joint extension of ``rho1`` and ``rho2`` on ``A(K u I)``.

    Restricts to ``rho1`` on ``A(K)`` and to ``rho2`` on ``A(I)``, but its
    entropy equals that of ``rho2_tilde``.  Swapping ``rho2_tilde`` for its
    parity image yields a *different* extension with the same marginals.
    """
    ctx = recipe.rho1.ctx
    _validate_recipe(ctx, recipe)
    K, I = recipe.K, recipe.I
    bK = ctx.basis(K.sites)
    bI = ctx.basis(I.sites)
    b = ctx.basis(K.sites + I.sites)
    u1 = recipe.u1.matrix

    rho1_plain = np.array([recipe.rho1.value(m) for m in bK.mats])
    rho1_twist = np.array([recipe.rho1.value(m @ u1) for m in bK.mats])
    rho2_even = np.array([recipe.rho2.value(m) for m in bI.mats])
    rho2t_odd = np.array([recipe.rho2_tilde.value(m) for m in bI.mats])

    even_mask = bI.parity > 0
    even_values = np.where(even_mask, rho2_even, 0.0)
    odd_values = np.where(even_mask, 0.0, rho2t_odd)
    psi_vec = np.kron(rho1_plain, even_values) + np.kron(rho1_twist, odd_values)

    overlap = b.overlap_matrix()
    coeffs = np.linalg.solve(overlap, psi_vec)
    rep = (coeffs @ b.flat).reshape(ctx.dim, ctx.dim)
    rep = (rep + rep.conj().T) / 2.0

    region = K.union(I)
    state = state_from_tau_form(ctx, region, rep, validate=False)
    lam_min = float(np.linalg.eigvalsh(state.intrinsic()).min())
    if lam_min < -1e-10:
        raise ExtensionError(f"reconstructed density is not positive (min eig {lam_min:.3e})")
    return state


def violation_demo(
    ctx: AlgebraContext,
    K: Region,
    I: Region,
    J: Region,
    rhoJ: State | None = None,
    rho2_tilde: State | None = None,
) -> InequalityReport:
    """Build ``psi o rhoJ`` and report its gaps, entropies and residuals.

    Expected pattern: the monotonicity-form gap on (I, J; K) and the
    triangle gap on (I, K) are negative (``-ln 2`` with the defaults) while
    the strong subadditivity gap on the overlapping pair (K u I, K u J)
    stays nonpositive.
    """
    recipe = build_recipe(ctx, K, I, rho2_tilde=rho2_tilde, J=J, rhoJ=rhoJ)
    psi = joint_extension(recipe)
    full = product_extension(psi, recipe.rhoJ)

    regions = {
        "K": K, "I": I, "J": J,
        "KI": K.union(I), "KJ": K.union(J), "KIJ": K.union(I).union(J),
    }
    entropies = {name: entropy(restrict(full, reg)) for name, reg in regions.items()}

    gaps = {
        "mono_ssa": mono_ssa_gap(full, I, J, K),
        "triangle": triangle_gap(full, I, K),
        "ssa": ssa_gap(full, K.union(I), K.union(J)),
    }
    residuals = {
        "restriction_K": density_distance(restrict(full, K), recipe.rho1),
        "restriction_I": density_distance(restrict(full, I), recipe.rho2),
        "restriction_J": density_distance(restrict(full, J), recipe.rhoJ),
        "entropy_vs_rho2_tilde": abs(entropies["KI"] - entropy(recipe.rho2_tilde)),
        "product_entropy": abs(entropies["KJ"] - entropies["K"] - entropies["J"]),
    }
    verdicts = {kind: classify_gap(kind, gap) for kind, gap in gaps.items()}
    return InequalityReport(
        regions={name: reg.sites for name, reg in regions.items()},
        even_state=is_even(full),
        tolerance=HOLD_TOL,
        ssa_gap=gaps["ssa"],
        triangle_gap=gaps["triangle"],
        mono_ssa_gap=gaps["mono_ssa"],
        verdicts=verdicts,
        entropies=entropies,
        residuals=residuals,
    )

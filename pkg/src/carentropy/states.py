"""States of CAR region subalgebras as density matrices.

Normalization convention
------------------------
A state ``phi`` on the region subalgebra ``A(R)`` is stored through its
*tracial representative*: the unique ``W`` in ``A(R)`` with

    phi(A) = tau(W A)   for all A in A(R),

where ``tau`` is the normalized trace of the full lattice algebra.  Thus
``tau(W) = 1`` and the tracial state has ``W = 1`` on every region.  The
equivalent *region-intrinsic density* is the ordinary trace-one
``2^|R| x 2^|R|`` density matrix of the state under the isomorphism
``A(R) ~ M(2^|R|)``; the two are related by

    intrinsic = to_local(W) / 2^|R|,

and :meth:`State.intrinsic` / :func:`state_from_intrinsic` are the only
converters used anywhere in the package.  All spectra, entropies and
fidelities are those of the intrinsic density.  Logarithms are natural, so
entropies are in nats and the tracial state on ``|R|`` sites has entropy
``|R| ln 2``.

Restriction is the trace-compatible conditional expectation applied to the
tracial representative; for regions that are a prefix of the site order it
coincides with the ordinary partial trace.  Densities are re-Hermitized
after every linear-algebra round trip; eigenvalues below ``1e-12`` are
clamped to zero before logarithms, while anything below ``-1e-8`` raises
:class:`NotAStateError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .car_algebra import AlgebraContext, OperatorElement, Region
from .errors import ExtensionError, NotAStateError

__all__ = [
    "State",
    "SpectralData",
    "state_from_tau_form",
    "state_from_intrinsic",
    "tracial_state",
    "vector_state",
    "entropy",
    "spectral_data",
    "restrict",
    "is_even",
    "transition_probability",
    "p_theta",
    "relative_entropy",
    "random_state",
    "product_extension",
    "density_distance",
]

EIG_FLOOR = 1e-12
NEGATIVE_EIG_TOL = 1e-8
EVEN_TOL = 1e-10


def _hermitize(x: np.ndarray) -> np.ndarray:
    return (x + x.conj().T) / 2.0


def _sqrt_psd(x: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh(_hermitize(x))
    lam = np.clip(lam, 0.0, None)
    return _hermitize((u * np.sqrt(lam)) @ u.conj().T)


def _clamped_spectrum(density: np.ndarray) -> np.ndarray:
    lam = np.linalg.eigvalsh(_hermitize(density))
    if lam.min() < -NEGATIVE_EIG_TOL:
        raise NotAStateError(f"density has negative eigenvalue {lam.min():.3e}")
    lam = lam.copy()
    lam[lam < EIG_FLOOR] = 0.0
    return lam


@dataclass(frozen=True)
class State:
    """A state of ``A(region)``, stored via its tracial representative."""

    ctx: AlgebraContext
    region: Region
    rep: np.ndarray

    @property
    def local_dim(self) -> int:
        return 2 ** len(self.region)

    def intrinsic(self) -> np.ndarray:
        """Region-intrinsic trace-one density matrix (``2^|R| x 2^|R|``)."""
        if self.region == self.ctx.lattice:
            return _hermitize(self.rep) / self.ctx.dim
        local = self.ctx.basis(self.region.sites).to_local(self.rep)
        return _hermitize(local) / self.local_dim

    def value(self, x) -> complex:
        """The functional ``phi(x) = tau(W x)`` for a global matrix ``x``."""
        m = x.matrix if isinstance(x, OperatorElement) else x
        return complex(np.einsum("ij,ji->", self.rep, m) / self.ctx.dim)

    def theta_image(self) -> "State":
        """The state ``phi o Theta``."""
        return State(self.ctx, self.region, self.ctx.theta_of(self.rep))


@dataclass(frozen=True)
class SpectralData:
    """Descending eigenvalues of an intrinsic density with grouped multiplicities."""

    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    eigenvectors: np.ndarray  # columns, matching eigenvalue order


def state_from_tau_form(
    ctx: AlgebraContext, region: Region, rep: np.ndarray, *, validate: bool = True
) -> State:
    """Build a state from its tracial representative ``W`` (``phi = tau(W .)``)."""
    ctx.check_region(region)
    rep = _hermitize(np.asarray(rep, dtype=complex))
    trace = np.trace(rep).real / ctx.dim
    if validate:
        if abs(trace - 1.0) > 1e-8:
            raise NotAStateError(f"tau(W) = {trace:.12f}, expected 1")
        if region != ctx.lattice:
            resid = ctx.basis(region.sites).membership_residual(rep)
            if resid > 1e-10 * max(1.0, float(np.linalg.norm(rep))):
                raise ValueError(
                    f"matrix not in the region subalgebra (residual {resid:.3e})"
                )
    rep = rep / trace
    state = State(ctx, region, rep)
    if validate:
        _clamped_spectrum(state.intrinsic())
    return state


def state_from_intrinsic(
    ctx: AlgebraContext, region: Region, density: np.ndarray, *, validate: bool = True
) -> State:
    """Build a state from its region-intrinsic trace-one density matrix."""
    ctx.check_region(region)
    density = _hermitize(np.asarray(density, dtype=complex))
    d = 2 ** len(region)
    if density.shape != (d, d):
        raise ValueError(f"density must be {d}x{d} for region {region.sites}")
    if validate:
        if abs(np.trace(density).real - 1.0) > 1e-8:
            raise NotAStateError(f"Tr(density) = {np.trace(density).real:.12f}, expected 1")
        _clamped_spectrum(density)
    if region == ctx.lattice:
        rep = density * d
    else:
        rep = ctx.basis(region.sites).from_local(density) * d
    return state_from_tau_form(ctx, region, rep, validate=False)


def tracial_state(ctx: AlgebraContext, region: Region) -> State:
    """The unique tracial state: ``W = 1``; entropy ``|R| ln 2``."""
    ctx.check_region(region)
    return State(ctx, region, np.eye(ctx.dim, dtype=complex))


def vector_state(ctx: AlgebraContext, region: Region, vec: np.ndarray) -> State:
    """Pure state of ``A(region)`` given by an intrinsic unit vector."""
    vec = np.asarray(vec, dtype=complex).ravel()
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"vector norm {norm:.12f} is not 1")
    return state_from_intrinsic(ctx, region, np.outer(vec, vec.conj()), validate=False)


def entropy(state: State) -> float:
    """Von Neumann entropy ``-sum lam ln lam`` of the intrinsic spectrum (nats)."""
    lam = _clamped_spectrum(state.intrinsic())
    nz = lam[lam > 0.0]
    return float(-(nz * np.log(nz)).sum())


def spectral_data(state: State, cluster_tol: float = 1e-9) -> SpectralData:
    """Descending intrinsic spectrum with multiplicities grouped at ``cluster_tol``."""
    lam, u = np.linalg.eigh(state.intrinsic())
    order = np.argsort(-lam)
    lam, u = lam[order], u[:, order]
    mult: list[int] = []
    for i, x in enumerate(lam):
        if mult and abs(x - lam[i - 1]) <= cluster_tol:
            mult[-1] += 1
        else:
            mult.append(1)
    return SpectralData(lam, tuple(mult), u)


def restrict(state: State, region: Region) -> State:
    """Restriction of the state to ``A(region)`` (conditional expectation).

    The restriction of an even state is even; restricting to the state's
    own region is the identity, and the empty region carries the unique
    (entropy-zero) state of the scalars.
    """
    if not region.issubset(state.region):
        raise ValueError(f"region {region.sites} not contained in {state.region.sites}")
    if region == state.region:
        return state
    rep = state.ctx.basis(region.sites).expect(state.rep)
    return state_from_tau_form(state.ctx, region, rep, validate=False)


def is_even(state: State, tol: float = EVEN_TOL) -> bool:
    """Whether the state is invariant under the grading automorphism."""
    diff = state.ctx.theta_of(state.rep) - state.rep
    opnorm = float(np.linalg.norm(diff, 2)) / state.local_dim
    return opnorm <= tol


def transition_probability(phi: State, psi: State) -> float:
    """Uhlmann fidelity ``(Tr |sqrt(D_phi) sqrt(D_psi)|)^2`` in ``[0, 1]``.

    This closed form attains the supremum of the vector-overlap definition
    of the transition probability in finite dimensions; it is symmetric and
    equals 1 exactly when the states coincide.
    """
    if phi.region != psi.region:
        raise ValueError("transition probability requires a common region")
    s = _sqrt_psd(phi.intrinsic()) @ _sqrt_psd(psi.intrinsic())
    fid = float(np.linalg.svd(s, compute_uv=False).sum() ** 2)
    return min(max(fid, 0.0), 1.0)


def p_theta(state: State) -> float:
    """Oddness quantifier ``P(phi, phi o Theta)^(1/2)``: 1 for even states."""
    return math.sqrt(transition_probability(state, state.theta_image()))


def relative_entropy(omega: State, sigma: State) -> float:
    """Relative entropy ``Tr D_omega (ln D_omega - ln D_sigma)`` in nats.

    Returns ``inf`` (flagged value, no exception) when the support of
    ``omega`` is not contained in the support of ``sigma``.
    """
    if omega.region != sigma.region:
        raise ValueError("relative entropy requires a common region")
    dw = omega.intrinsic()
    lam_w = _clamped_spectrum(dw)
    lam_s, u_s = np.linalg.eigh(sigma.intrinsic())
    support = lam_s > EIG_FLOOR
    weights = np.einsum("ij,jk,ki->i", u_s.conj().T, dw, u_s).real
    outside = float(weights[~support].sum())
    if outside > 1e-10:
        return math.inf
    nz = lam_w[lam_w > 0.0]
    term_w = float((nz * np.log(nz)).sum())
    term_s = float((weights[support] * np.log(lam_s[support])).sum())
    return term_w - term_s


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases.conj()


def _local_parity_diag(k: int) -> np.ndarray:
    idx = np.arange(2 ** k)
    d = np.ones(2 ** k)
    for i in range(1, k + 1):
        bit = (idx >> (k - i)) & 1
        d *= np.where(bit == 1, 1.0, -1.0)
    return d


def random_state(
    ctx: AlgebraContext,
    region: Region,
    *,
    even: bool = False,
    rank: int | None = None,
    seed=0,
) -> State:
    """Reproducible pseudo-random state of ``A(region)`` with the given rank.

    Eigenvalues are a random simplex point; eigenvectors are Haar columns.
    With ``even=True`` the columns are drawn block-wise inside the two
    eigenspaces of the region parity unitary, so the density commutes with
    it by construction.  ``seed`` may be anything accepted by
    ``numpy.random.default_rng``.
    """
    ctx.check_region(region)
    d = 2 ** len(region)
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    weights = rng.exponential(size=rank)
    weights = weights / weights.sum()

    if even and len(region) >= 1:
        par = _local_parity_diag(len(region))
        plus = np.where(par > 0)[0]
        minus = np.where(par < 0)[0]
        lo = max(0, rank - len(minus))
        hi = min(rank, len(plus))
        r_plus = int(rng.integers(lo, hi + 1))
        cols = []
        for idx, r in ((plus, r_plus), (minus, rank - r_plus)):
            if r == 0:
                continue
            u = _haar_unitary(len(idx), rng)[:, :r]
            embedded = np.zeros((d, r), dtype=complex)
            embedded[idx, :] = u
            cols.append(embedded)
        v = np.hstack(cols)
    else:
        v = _haar_unitary(d, rng)[:, :rank]

    density = _hermitize((v * weights) @ v.conj().T)
    return state_from_intrinsic(ctx, region, density, validate=False)


def product_extension(state_a: State, state_b: State) -> State:
    """The product state ``phi(AB) = phi_A(A) phi_B(B)`` on the union region.

    Exists (and is unique) when the regions are disjoint and at least one
    factor is even; then the two tracial representatives commute and the
    extension is their product.
    """
    if state_a.ctx is not state_b.ctx:
        raise ValueError("states live on different lattice contexts")
    if not state_a.region.isdisjoint(state_b.region):
        raise ValueError("product extension requires disjoint regions")
    if not (is_even(state_a) or is_even(state_b)):
        raise ExtensionError(
            "product state extension requires at least one even factor"
        )
    rep = _hermitize(state_a.rep @ state_b.rep)
    region = state_a.region.union(state_b.region)
    return state_from_tau_form(state_a.ctx, region, rep, validate=False)


def density_distance(a: State, b: State) -> float:
    """Operator-norm distance of the intrinsic densities (same region)."""
    if a.region != b.region:
        raise ValueError("states live on different regions")
    return float(np.linalg.norm(a.intrinsic() - b.intrinsic(), 2))

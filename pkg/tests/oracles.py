"""Independent brute-force oracles used by the tests.

Everything here is built from scratch on purpose: plain Kronecker products,
plain partial traces, and a direct representation-based evaluation of the
joint-extension functional.  None of it goes through the package's basis
projection machinery, so agreement is meaningful.
"""

import numpy as np

LOWER = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
EYE2 = np.eye(2, dtype=complex)


def kron_chain(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def jw_annihilators(n):
    """Jordan-Wigner annihilation matrices, site 1 on the leading factor."""
    return [
        kron_chain([PAULI_Z] * (i - 1) + [LOWER] + [EYE2] * (n - i))
        for i in range(1, n + 1)
    ]


def partial_trace(rho, dims, keep):
    """Partial trace of a density on a tensor product with factor sizes ``dims``.

    ``keep`` lists the factor indices to retain, in order.
    """
    n = len(dims)
    rho = rho.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    for offset, i in enumerate(sorted(drop)):
        axis = i - offset
        rho = np.trace(rho, axis1=axis, axis2=axis + rho.ndim // 2)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return rho.reshape(d, d)


def vn_entropy(rho):
    lam = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    lam = lam[lam > 1e-12]
    return float(-(lam * np.log(lam)).sum())


def single_site_monomials():
    """Local factors 1, a, a*, v with their parities."""
    v = LOWER.conj().T @ LOWER - LOWER @ LOWER.conj().T
    return [(EYE2, 1), (LOWER, -1), (LOWER.conj().T, -1), (v, 1)]


def car_monomials(n):
    """All 4^n ordered monomials of the n-site lattice with parities."""
    ann = jw_annihilators(n)
    mats = [np.eye(2 ** n, dtype=complex)]
    pars = [1]
    for i in range(n):
        a = ann[i]
        ad = a.conj().T
        v = ad @ a - a @ ad
        site = [(np.eye(2 ** n, dtype=complex), 1), (a, -1), (ad, -1), (v, 1)]
        mats = [m @ f for m in mats for f, _ in site]
        pars = [p * q for p in pars for _, q in site]
    return mats, pars


def joint_extension_functional(p, q, eta_k, eta_i):
    """Representation-based values of the joint extension on product monomials.

    ``eta_k`` (dim ``2^p``) and ``eta_i`` (dim ``2^q``) are the defining
    vectors of the maximally odd pure states on the two lattices.  The
    twisted representation acts on the tensor product: an even second
    factor acts as ``A1 (x) A2``, an odd one as ``A1 u1 (x) A2`` with
    ``u1`` the parity unitary of the first lattice.  Returns the matrix of
    values ``psi[(alpha, beta)]`` over all monomial pairs together with the
    product monomials of the combined defining representation.
    """
    mats_k, _ = car_monomials(p)
    mats_i, pars_i = car_monomials(q)
    u1 = kron_chain([-PAULI_Z] * p)
    omega = np.kron(eta_k, eta_i)

    values = np.zeros((len(mats_k), len(mats_i)), dtype=complex)
    for al, a1 in enumerate(mats_k):
        for be, a2 in enumerate(mats_i):
            first = a1 if pars_i[be] > 0 else a1 @ u1
            # rho2(A2_even) for the symmetrized partner equals the raw value
            # of the odd defining state on even elements, so one vector does
            # both jobs here (its odd values enter only through the twist).
            pi = np.kron(first, a2)
            values[al, be] = omega.conj() @ (pi @ omega)
    return values


def solve_density_from_functional(values, p, q):
    """Trace-one density of the combined lattice from functional values.

    Solves ``Tr(D X_ab) = psi(X_ab)`` over the product monomials ``X_ab``
    of the combined (p+q)-site defining representation, built K-first.
    """
    n = p + q
    ann = jw_annihilators(n)
    d = 2 ** n

    def monomials_for(sites):
        mats = [np.eye(d, dtype=complex)]
        for s in sites:
            a = ann[s]
            ad = a.conj().T
            v = ad @ a - a @ ad
            mats = [m @ f for m in mats for f in (np.eye(d, dtype=complex), a, ad, v)]
        return mats

    mk = monomials_for(range(p))
    mi = monomials_for(range(p, n))
    rows = []
    rhs = []
    for al, a1 in enumerate(mk):
        for be, a2 in enumerate(mi):
            x = a1 @ a2
            rows.append(x.T.ravel())
            rhs.append(values[al, be])
    coeff = np.array(rows)
    sol = np.linalg.lstsq(coeff, np.array(rhs), rcond=None)[0]
    dens = sol.reshape(d, d)
    return (dens + dens.conj().T) / 2.0

import math

import numpy as np
import pytest

from carentropy import (
    CapacityError,
    Region,
    density_distance,
    entropy,
    is_even,
    pure_extension,
    random_state,
    restrict,
    schmidt,
    symmetric_purification,
    tracial_state,
    vector_state,
)


def sorted_nonzero_spectrum(state, tol=1e-11):
    lam = np.linalg.eigvalsh(state.intrinsic())
    return np.sort(lam[lam > tol])[::-1]


class TestSchmidt:
    def test_product_vector_single_coefficient(self):
        left = np.array([1.0, 1.0j]) / math.sqrt(2)
        right = np.array([0.0, 1.0])
        dec = schmidt(np.kron(left, right), (2, 2))
        assert dec.lambdas.shape == (1,)
        assert abs(dec.lambdas[0] - 1.0) <= 1e-12

    def test_bell_coefficients(self):
        vec = np.zeros(4)
        vec[0] = vec[3] = 1.0 / math.sqrt(2)
        dec = schmidt(vec, (2, 2))
        assert np.abs(dec.lambdas - 1.0 / math.sqrt(2)).max() <= 1e-12

    def test_random_reconstruction(self):
        rng = np.random.default_rng(1)
        vec = rng.normal(size=16) + 1j * rng.normal(size=16)
        vec /= np.linalg.norm(vec)
        dec = schmidt(vec, (4, 4))
        assert abs((dec.lambdas ** 2).sum() - 1.0) <= 1e-10
        assert np.abs(dec.reconstruct() - vec).max() <= 1e-10
        for fam in (dec.left_vectors, dec.right_vectors):
            gram = fam.conj().T @ fam
            assert np.abs(gram - np.eye(fam.shape[1])).max() <= 1e-10

    def test_descending_order(self):
        rng = np.random.default_rng(2)
        vec = rng.normal(size=8) + 1j * rng.normal(size=8)
        vec /= np.linalg.norm(vec)
        dec = schmidt(vec, (2, 4))
        assert np.all(np.diff(dec.lambdas) <= 0)

    def test_non_unit_vector_rejected(self):
        with pytest.raises(ValueError):
            schmidt(np.array([1.0, 1.0, 0.0, 0.0]), (2, 2))

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            schmidt(np.array([1.0, 0.0]), (2, 2))


class TestPureExtension:
    def test_restriction_recovers_input(self, ctx3):
        rho = random_state(ctx3, Region((2,)), seed=3)
        ext = pure_extension(rho, Region((1, 3)))
        assert entropy(ext) <= 1e-9
        assert density_distance(restrict(ext, Region((2,))), rho) <= 1e-10

    def test_pure_input_gives_product_vector(self, ctx2):
        rho = random_state(ctx2, Region((1,)), rank=1, seed=4)
        ext = pure_extension(rho, Region((2,)))
        # Schmidt rank 1: the marginal on the partner region is pure too.
        assert entropy(restrict(ext, Region((2,)))) <= 1e-9

    def test_tracial_single_site_maximally_entangled(self, ctx2):
        ext = pure_extension(tracial_state(ctx2, Region((1,))), Region((2,)))
        lam = sorted_nonzero_spectrum(restrict(ext, Region((1,))))
        assert np.abs(lam - 0.5).max() <= 1e-10
        assert entropy(ext) <= 1e-9

    def test_small_partner_allowed_for_low_rank(self, ctx3):
        rho = random_state(ctx3, Region((1, 2)), rank=2, seed=5)
        ext = pure_extension(rho, Region((3,)))  # |J| < |I| but rank fits
        assert density_distance(restrict(ext, Region((1, 2))), rho) <= 1e-10

    def test_capacity_error(self, ctx3):
        rho = random_state(ctx3, Region((1, 2)), rank=4, seed=6)
        with pytest.raises(CapacityError):
            pure_extension(rho, Region((3,)))

    def test_overlap_rejected(self, ctx2):
        rho = random_state(ctx2, Region((1,)), seed=7)
        with pytest.raises(ValueError):
            pure_extension(rho, Region((1, 2)))


class TestSymmetricPurification:
    def test_output_even_and_pure(self, ctx2):
        rho = random_state(ctx2, Region((1,)), even=True, seed=8)
        ext = symmetric_purification(rho, Region((2,)))
        assert entropy(ext) <= 1e-9
        assert is_even(ext)

    def test_restriction_identity(self, ctx2):
        rho = random_state(ctx2, Region((1,)), even=True, seed=9)
        ext = symmetric_purification(rho, Region((2,)))
        assert density_distance(restrict(ext, Region((1,))), rho) <= 1e-10

    def test_marginal_spectra_equal_multisets(self, ctx4):
        rho = random_state(ctx4, Region((1, 3)), even=True, seed=10)
        ext = symmetric_purification(rho, Region((2, 4)))
        lam_i = sorted_nonzero_spectrum(restrict(ext, Region((1, 3))))
        lam_j = sorted_nonzero_spectrum(restrict(ext, Region((2, 4))))
        assert lam_i.shape == lam_j.shape
        assert np.abs(lam_i - lam_j).max() <= 1e-9

    def test_tracial_partner_forced_tracial(self, ctx2):
        ext = symmetric_purification(tracial_state(ctx2, Region((1,))), Region((2,)))
        partner = restrict(ext, Region((2,)))
        assert density_distance(partner, tracial_state(ctx2, Region((2,)))) <= 1e-10

    def test_purified_vector_in_union_parity_eigenspace(self, ctx2):
        # Even pure states are vector states of parity eigenvectors, so the
        # purification commutes with the union parity unitary.
        rho = random_state(ctx2, Region((1,)), even=True, seed=11)
        ext = symmetric_purification(rho, Region((2,)))
        v = ctx2.parity_matrix((1, 2))
        d = ext.intrinsic()
        assert np.abs(v @ d @ v - d).max() <= 1e-10

    def test_noneven_input_rejected(self, ctx2):
        rho = random_state(ctx2, Region((1,)), rank=1, seed=12)
        assert not is_even(rho)
        with pytest.raises(ValueError):
            symmetric_purification(rho, Region((2,)))

    def test_even_pure_extension_property_sweep(self, ctx3):
        # Restrictions of any even pure state have the same nonzero
        # spectrum; combine the purifier with random even inputs.
        for seed in range(15):
            rho = random_state(ctx3, Region((2,)), even=True, seed=seed)
            ext = symmetric_purification(rho, Region((1, 3)))
            lam_i = sorted_nonzero_spectrum(restrict(ext, Region((2,))))
            lam_j = sorted_nonzero_spectrum(restrict(ext, Region((1, 3))))
            assert np.abs(lam_i - lam_j).max() <= 1e-9

    def test_interleaved_regions(self, ctx4):
        rho = random_state(ctx4, Region((2, 4)), even=True, seed=13)
        ext = symmetric_purification(rho, Region((1, 3)))
        assert is_even(ext)
        assert entropy(ext) <= 1e-9
        assert density_distance(restrict(ext, Region((2, 4))), rho) <= 1e-10

    def test_larger_partner_region(self, ctx5):
        I, J = Region((2, 4)), Region((1, 3, 5))
        rho = random_state(ctx5, I, even=True, seed=3)
        ext = symmetric_purification(rho, J)
        assert entropy(ext) <= 1e-9
        assert is_even(ext)
        assert density_distance(restrict(ext, I), rho) <= 1e-10
        lam_i = sorted_nonzero_spectrum(restrict(ext, I))
        lam_j = sorted_nonzero_spectrum(restrict(ext, J))
        assert lam_i.shape == lam_j.shape
        assert np.abs(lam_i - lam_j).max() <= 1e-9


class TestVectorStateHelpers:
    def test_vector_state_requires_unit_norm(self, ctx1):
        with pytest.raises(ValueError):
            vector_state(ctx1, Region((1,)), np.array([1.0, 1.0]))

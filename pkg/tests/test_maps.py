import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import finite_difference
from ruelle.maps import (
    Annulus,
    BlaschkeProduct,
    MobiusFamilyMap,
    TrigLift,
    check_holo_expansive,
    degree,
    fixed_point_disk,
    from_descriptor,
    iterate,
    min_expansion,
    orientation,
    second_iterate_multiplier,
    to_descriptor,
)


class TestEval:
    def test_bstar_fixes_one(self, bstar):
        assert bstar.eval(1.0) == pytest.approx(1.0, abs=1e-14)

    def test_squaring(self, squaring):
        assert squaring.eval(0.5j) == pytest.approx(-0.25, abs=1e-14)

    def test_mobius_w0_is_squaring(self):
        m = MobiusFamilyMap(0.0)
        for z in (0.3, 1.1 + 0.2j, -0.9j):
            assert m.eval(z) == pytest.approx(z * z, abs=1e-14)

    def test_mobius_w1_is_bstar(self, bstar):
        m = MobiusFamilyMap(1.0)
        for z in (0.9, 1.2j, -1.05):
            assert m.eval(z) == pytest.approx(bstar.eval(z), abs=1e-13)

    def test_anti_is_reciprocal(self, bstar, anti_bstar):
        z = 0.8 * np.exp(0.3j)
        assert anti_bstar.eval(z) == pytest.approx(1.0 / bstar.eval(z), abs=1e-13)

    def test_anti_pole_is_domain_error(self, anti_bstar):
        with pytest.raises(ValueError, match="pole"):
            anti_bstar.eval(0.5)


class TestDeriv:
    def test_bstar_multiplier_at_origin(self, bstar):
        assert bstar.deriv(0.0) == pytest.approx(-0.5, abs=1e-14)

    def test_squaring(self, squaring):
        assert squaring.deriv(1.0) == pytest.approx(2.0, abs=1e-13)

    def test_bstar_at_one(self, bstar):
        # d/dz (2z^2 - z)/(2 - z) at z=1: ((4z-1)(2-z) + (2z^2-z))/(2-z)^2 = 4
        assert bstar.deriv(1.0) == pytest.approx(4.0, abs=1e-13)

    def test_matches_finite_differences_at_random_points(self, bstar, anti_bstar):
        rng = np.random.default_rng(11)
        maps = [
            bstar,
            anti_bstar,
            TrigLift(2, cos_coeffs=(0.1,), sin_coeffs=(0.05, 0.02)),
            MobiusFamilyMap(0.5 + 0.26j),
        ]
        for m in maps:
            for _ in range(100):
                z = rng.uniform(0.9, 1.1) * np.exp(2j * np.pi * rng.uniform())
                fd = finite_difference(m, z)
                an = m.deriv(z)
                assert abs(fd - an) <= 1e-6 * max(1.0, abs(an))


class TestDegreeOrientation:
    def test_squaring(self, squaring):
        assert degree(squaring) == 2
        assert orientation(squaring) == 1

    def test_bstar_winding(self, bstar):
        assert degree(bstar) == 2

    def test_anti_negates_winding(self, anti_bstar):
        assert degree(anti_bstar) == -2
        assert orientation(anti_bstar) == -1

    def test_negative_triglift(self):
        assert orientation(TrigLift(-3)) == -1

    def test_unresolved_winding_rejected(self):
        class NearCircleZero:
            # zeros a hair outside the unit circle: true winding 0, but the
            # quadrature cannot resolve the near-singularity
            def eval(self, z):
                return z * z - 1.00000001

            def deriv(self, z):
                return 2 * z

        with pytest.raises(ValueError, match="circle|unresolved"):
            degree(NearCircleZero())

    def test_orientation_needs_degree_two(self):
        class Identity:
            degree = 1

        with pytest.raises(ValueError, match="degree"):
            orientation(Identity())


class TestExpansion:
    def test_squaring(self, squaring):
        assert min_expansion(squaring) == pytest.approx(2.0, abs=1e-12)

    def test_bstar_expanding(self, bstar):
        # Sum (1-|a_j|)/(1+|a_j|) = 1 + 1/3 > 1 guarantees expansivity
        assert min_expansion(bstar) > 1.0

    def test_triglift_dense_sampling_oracle(self):
        m = TrigLift(2, cos_coeffs=(0.9,))
        # |lift'| = |2 - 0.9 sin(theta)| has minimum 1.1
        assert min_expansion(m, 8192) == pytest.approx(1.1, abs=1e-6)

    def test_sample_floor(self, bstar):
        with pytest.raises(ValueError, match="256"):
            min_expansion(bstar, 100)


class TestInclusions:
    def test_squaring_a1(self, squaring, annulus):
        chk = check_holo_expansive(squaring, annulus)
        assert chk.verdict == "A1"
        # margins from 0.64 < 0.8 and 1.5625 > 1.25
        assert chk.margin == pytest.approx(min(0.8 - 0.64, 1.5625 - 1.25), abs=1e-9)

    def test_anti_a2(self, anti_bstar, annulus):
        assert check_holo_expansive(anti_bstar, annulus).verdict == "A2"

    def test_shifted_map_fails_thin_annulus(self, bstar):
        class Shifted:
            # no longer circle-preserving: both inclusions break
            def eval(self, z):
                return bstar.eval(z) + 0.05

        chk = check_holo_expansive(Shifted(), Annulus(0.99, 1.01))
        assert chk.verdict == "none"
        assert chk.margin <= 0

    def test_orientation_matches_verdict(self, bstar, anti_bstar, squaring):
        for m in (bstar, anti_bstar, squaring):
            for t in (0.1, 0.15, 0.2):
                chk = check_holo_expansive(m, Annulus(np.exp(-t), np.exp(t)))
                if chk.verdict == "none":
                    continue
                assert chk.verdict == ("A1" if orientation(m) == 1 else "A2")


class TestFixedPoint:
    def test_bstar(self, bstar):
        z0, mu = fixed_point_disk(bstar)
        assert abs(z0) < 1e-13
        assert mu == pytest.approx(-0.5, abs=1e-12)

    def test_power_map(self, squaring):
        z0, mu = fixed_point_disk(squaring)
        assert abs(z0) < 1e-13 and abs(mu) < 1e-13

    def test_mobius_w1(self):
        z0, mu = fixed_point_disk(MobiusFamilyMap(1.0))
        assert abs(z0) < 1e-12
        assert mu == pytest.approx(-0.5, abs=1e-12)

    def test_off_center_fixed_point(self):
        m = BlaschkeProduct(1.0, (0.2 + 0.1j, -0.3, 0.15))
        z0, mu = fixed_point_disk(m)
        assert abs(m.eval(z0) - z0) < 1e-12
        assert abs(z0) < 1 and abs(mu) < 1


class TestSecondIterateMultiplier:
    def test_anti_bstar(self, anti_bstar):
        assert second_iterate_multiplier(anti_bstar) == pytest.approx(0.5, abs=1e-12)

    def test_product_of_moduli(self):
        m = BlaschkeProduct(1.0, (0.0, 0.3, -0.4), anti=True)
        assert second_iterate_multiplier(m) == pytest.approx(0.12, abs=1e-12)

    def test_superattracting(self):
        m = BlaschkeProduct(1.0, (0.0, 0.0, 0.0), anti=True)
        assert second_iterate_multiplier(m) == pytest.approx(0.0, abs=1e-13)

    def test_requires_anti(self, bstar):
        with pytest.raises(ValueError, match="anti"):
            second_iterate_multiplier(bstar)


class TestIterate:
    def test_power_map_composition(self, squaring):
        it = iterate(squaring, 3)
        z = 0.7 * np.exp(0.4j)
        assert it.eval(z) == pytest.approx(z**8, abs=1e-12)

    def test_degree_multiplies(self, bstar):
        assert degree(iterate(bstar, 2)) == 4
        assert iterate(bstar, 5).degree == 32

    def test_multiplier_powers(self, bstar):
        _, mu = fixed_point_disk(iterate(bstar, 2))
        assert mu == pytest.approx(0.25, abs=1e-12)

    def test_rejects_zero(self, bstar):
        with pytest.raises(ValueError):
            iterate(bstar, 0)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=0.7, allow_nan=False), min_size=2, max_size=4),
    st.floats(min_value=0.0, max_value=2 * np.pi),
    st.floats(min_value=0.6, max_value=1.6),
)
def test_blaschke_reflection(zeros, angle, mod):
    # B_a(1/z) = 1 / B_conj(a)(z) away from zeros/poles
    b = BlaschkeProduct(1.0, zeros)
    z = mod * np.exp(1j * angle)
    lhs = b.eval(1.0 / z)
    rhs = b.conjugate_params().eval(z)
    if abs(rhs) > 1e-6:
        assert lhs == pytest.approx(1.0 / rhs, rel=1e-10, abs=1e-12)


def test_point_evaluation_bound():
    # |f(z)| <= r / sqrt(r^2 - |z|^2) * ||f|| with ||f||^2 = sum |f_n|^2 r^(2n)
    rng = np.random.default_rng(5)
    r = 0.9
    for _ in range(50):
        deg = rng.integers(1, 21)
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        z = r * np.sqrt(rng.uniform(0, 0.98)) * np.exp(2j * np.pi * rng.uniform())
        fval = sum(c * z**n for n, c in enumerate(coeffs))
        norm = np.sqrt(sum(abs(c) ** 2 * r ** (2 * n) for n, c in enumerate(coeffs)))
        bound = r / np.sqrt(r**2 - abs(z) ** 2) * norm
        assert abs(fval) <= bound * (1 + 1e-12)


class TestValidation:
    def test_unimodular_alpha(self):
        with pytest.raises(ValueError, match="alpha"):
            BlaschkeProduct(1.1, (0.0, 0.5))

    def test_zeros_inside_disk(self):
        with pytest.raises(ValueError, match="unit disk"):
            BlaschkeProduct(1.0, (0.0, 1.2))

    def test_degree_floor(self):
        with pytest.raises(ValueError, match="degree"):
            BlaschkeProduct(1.0, (0.3,))
        with pytest.raises(ValueError, match="d"):
            TrigLift(1)

    def test_annulus_ordering(self):
        with pytest.raises(ValueError):
            Annulus(1.2, 0.8)
        with pytest.raises(ValueError):
            Annulus(-0.1, 1.5)

    def test_mobius_pole_check(self):
        with pytest.raises(ValueError, match="pole"):
            MobiusFamilyMap(1.6, annulus=Annulus(0.8, 1.3))


def test_descriptor_round_trip(bstar, anti_bstar):
    for m in (bstar, anti_bstar, TrigLift(3, (0.1,), (0.2,)), MobiusFamilyMap(0.5 + 0.26j)):
        m2 = from_descriptor(to_descriptor(m))
        z = 1.02 * np.exp(0.7j)
        assert m2.eval(z) == pytest.approx(m.eval(z), abs=1e-14)
    with pytest.raises(ValueError, match="descriptor"):
        from_descriptor({"type": "nope"})

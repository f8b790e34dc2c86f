import numpy as np
import pytest

from ruelle.lifts import build_homotopy, find_expansive_annulus, lift, lift_eval
from ruelle.maps import (
    BlaschkeProduct,
    MobiusFamilyMap,
    TrigLift,
    check_holo_expansive,
    min_expansion,
    orientation,
)

THETA = 2 * np.pi * np.arange(512) / 512


class TestLift:
    def test_power_map_is_linear(self):
        L = lift(TrigLift(3))
        assert L.d == 3
        assert L.alpha == 0.0
        assert len(L.ns) == 0

    def test_bstar_degree_increment(self, bstar):
        L = lift(bstar)
        assert L.d == 2
        inc = L.eval(2 * np.pi) - L.eval(0.0)
        assert inc == pytest.approx(4 * np.pi, abs=1e-12)

    def test_roundtrip_on_circle(self, bstar, anti_bstar):
        for m in (bstar, anti_bstar, TrigLift(2, (0.1,), (0.05,))):
            L = lift(m)
            err = np.abs(np.exp(1j * L.eval(THETA)) - m.eval(np.exp(1j * THETA))).max()
            assert err < 1e-10

    def test_triglift_recovery(self):
        # p(theta) = 0.1 sin(theta): derivative 0.1 cos(theta) has
        # coefficients 0.05 at n = +-1
        m = TrigLift(2, sin_coeffs=(0.1,))
        L = lift(m)
        got = dict(zip(L.ns.tolist(), L.gs.tolist()))
        assert got[1] == pytest.approx(0.05, abs=1e-12)
        assert got[-1] == pytest.approx(0.05, abs=1e-12)
        vals = L.eval(THETA)
        want = 2 * THETA + 0.1 * np.sin(THETA)
        assert np.abs(vals - want).max() < 1e-10

    def test_degenerate_degree_rejected(self):
        class Rotation:
            def eval(self, z):
                return 1j * z

            def deriv(self, z):
                return np.full_like(z, 1j)

        with pytest.raises(ValueError, match="degree"):
            lift(Rotation())

    def test_vanishing_map_rejected(self):
        class Vanishing:
            def eval(self, z):
                return z * z - 1.0

            def deriv(self, z):
                return 2 * z

        with pytest.raises(ValueError, match="vanishes"):
            lift(Vanishing())


class TestLiftEval:
    def test_linear_point(self):
        L = lift(TrigLift(2))
        assert lift_eval(L, np.pi / 2) == pytest.approx(np.pi, abs=1e-14)

    def test_bstar_at_zero(self, bstar):
        # B*(1) = 1 so alpha = 0 and lift(0) = 0
        L = lift(bstar)
        assert abs(lift_eval(L, 0.0)) < 1e-12

    def test_imaginary_argument(self):
        L = lift(TrigLift(2))
        assert lift_eval(L, 0.05j) == pytest.approx(0.1j, abs=1e-14)

    def test_strip_guard(self, bstar):
        L = lift(bstar)
        with pytest.raises(ValueError, match="strip"):
            L.eval(2j * L.strip + 1.0)


class TestBuildHomotopy:
    def test_squaring_to_bstar(self, squaring, bstar):
        fam = build_homotopy(squaring, bstar)
        assert fam.d == 2
        assert fam.eta > 0
        assert fam.margin_inner > 0 and fam.margin_outer > 0
        assert fam.r1 < fam.r0 < 1 < fam.R0 < fam.R1

    def test_degree_mismatch(self, squaring):
        with pytest.raises(ValueError, match="2 vs 3"):
            build_homotopy(squaring, TrigLift(3))

    def test_constant_family(self, squaring):
        fam = build_homotopy(squaring, TrigLift(2))
        z = 0.9
        for w in (0.0, 0.3, 1.0):
            assert fam.member(w).eval(z) == pytest.approx(0.81, abs=1e-12)

    def test_reversing_pair(self, anti_bstar):
        inv2 = BlaschkeProduct(1.0, (0.0, 0.0), anti=True)
        fam = build_homotopy(inv2, anti_bstar)
        assert fam.d == -2
        assert fam.margin_inner > 0 and fam.margin_outer > 0


@pytest.fixture(scope="module")
def family(squaring, bstar):
    return build_homotopy(squaring, bstar)


class TestHomotopyMembers:
    def test_endpoints(self, family, squaring, bstar):
        zs = np.exp(1j * THETA)
        assert np.abs(family.member(0.0).eval(zs) - squaring.eval(zs)).max() < 1e-10
        assert np.abs(family.member(1.0).eval(zs) - bstar.eval(zs)).max() < 1e-10

    def test_single_valued_across_branch_cut(self, family):
        m = family.member(0.3 + 0.01j)
        # points straddling the negative real axis, where the principal log jumps
        near = -1.0 + 1e-9j
        far = -1.0 - 1e-9j
        assert m.eval(near) == pytest.approx(m.eval(far), abs=1e-6)
        zs = np.exp(1j * np.array([np.pi - 1e-12, -np.pi + 1e-12]))
        vals = m.eval(zs)
        assert vals[0] == pytest.approx(vals[1], abs=1e-9)

    def test_real_parameters_preserve_circle(self, family):
        zs = np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
        for w in np.linspace(0, 1, 11):
            member = family.member(w)
            assert np.abs(np.abs(member.eval(zs)) - 1).max() < 1e-10
            assert min_expansion(member) > 1

    def test_complex_parameters_stay_expansive(self, family):
        rng = np.random.default_rng(20)
        ann = family.annulus()
        for _ in range(20):
            w = rng.uniform(0, 1) + 1j * rng.uniform(0.2, 1.0) * family.eta
            member = family.member(w)
            chk = check_holo_expansive(member, ann, 512)
            assert chk.verdict == ("A1" if family.d > 0 else "A2")

    def test_membership_guard(self, family):
        with pytest.raises(ValueError, match="neighbourhood"):
            family.member(0.5 + 3j * family.eta)

    def test_domain_guard(self, family):
        with pytest.raises(ValueError, match="annulus"):
            family.member(0.5).eval(family.R0 * 1.5)

    def test_member_drives_operator_pipeline(self, family):
        from ruelle.spectra import converged_spectrum

        member = family.member(1.0)
        spec = converged_spectrum(member, family.annulus(), tol=1e-8, want=5)
        assert spec.eigenvalues[0] == pytest.approx(1.0, abs=1e-8)
        assert abs(spec.eigenvalues[1]) == pytest.approx(0.5, abs=1e-7)


def test_mobius_family_preserves_circle_exactly():
    # |2z - w| = |2 - wz| on |z| = 1 for real w
    zs = np.exp(1j * THETA)
    for w in np.linspace(0, 1, 11):
        vals = np.abs(MobiusFamilyMap(w).eval(zs))
        assert np.abs(vals - 1).max() < 1e-12


def test_find_expansive_annulus(bstar, anti_bstar):
    for m in (bstar, anti_bstar):
        ann = find_expansive_annulus(m)
        chk = check_holo_expansive(m, ann)
        assert chk.verdict == ("A1" if orientation(m) == 1 else "A2")
        assert chk.margin > 0

import numpy as np
import pytest

from oracles import subset_entropy, w_amps
from qredist.entropy import RoleEntropies, RolePartition
from qredist.errors import NotPureError, TaskMismatchError
from qredist.linalg import DensityMatrix, StateVector, permute_subsystems, random_pure_state, tensor_product
from qredist.statespec import HjpwBlock, HjpwSpec, make_cat, make_hjpw, random_hjpw_spec
from qredist.tasks import (
    composability_check,
    fqrs_corner,
    fqrs_region,
    fqsw_corner,
    fqsw_region,
    is_achievable,
    merging_costs,
    redistribution_corner,
    redistribution_region,
    time_reversal_dual,
)

from test_entropy import H_C_GIVEN_B_W, QCMI_W

ABCR = RolePartition.from_labels("ABCR")
W4 = StateVector(w_amps(4), (2, 2, 2, 2))
BELL = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))


def ket0(d=2):
    return StateVector(np.eye(d)[0], (d,))


def product(n, seed=0):
    psi = random_pure_state((2,), seed)
    for k in range(1, n):
        psi = tensor_product(psi, random_pure_state((2,), seed + k))
    return psi


class TestRegion:
    def test_cat(self):
        region = redistribution_region(make_cat(4), ABCR)
        assert [c.bound for c in region.constraints] == pytest.approx([0, 0], abs=1e-12)
        assert [(c.q_coeff, c.e_coeff) for c in region.constraints] == [(1, 0), (1, 1)]

    def test_product(self):
        region = redistribution_region(product(4), ABCR)
        assert [c.bound for c in region.constraints] == pytest.approx([0, 0], abs=1e-12)

    def test_w(self):
        region = redistribution_region(W4, ABCR)
        assert region.constraints[0].bound == pytest.approx(QCMI_W / 2, abs=1e-12)
        assert region.constraints[1].bound == pytest.approx(H_C_GIVEN_B_W, abs=1e-12)

    def test_rejects_mixed(self):
        rho = DensityMatrix(np.eye(16) / 16, (2, 2, 2, 2))
        with pytest.raises(NotPureError) as info:
            redistribution_region(rho, ABCR)
        assert info.value.exit_code == 4

    def test_accepts_pure_density_matrix(self):
        corner = redistribution_corner(W4.density(), ABCR)
        assert corner.Q == pytest.approx(QCMI_W / 2, abs=1e-9)


class TestCorner:
    def test_cat(self):
        c = redistribution_corner(make_cat(4), ABCR)
        assert (c.Q, c.E) == pytest.approx((0, 0), abs=1e-12)

    def test_w(self):
        c = redistribution_corner(W4, ABCR)
        assert c.E == pytest.approx(0, abs=1e-12)
        assert c.Q == pytest.approx(0.18872, abs=1e-5)

    def test_region_corner_consistent(self):
        psi = random_pure_state((2, 3, 2, 3), 4)
        region = redistribution_region(psi, ABCR)
        c = redistribution_corner(psi, ABCR)
        assert tuple(region.corner()) == pytest.approx(tuple(c), abs=1e-12)

    @pytest.mark.parametrize("seed", range(50))
    def test_membership(self, seed):
        psi = random_pure_state((2, 2, 3, 2), seed)
        region = redistribution_region(psi, ABCR)
        c = redistribution_corner(psi, ABCR)
        assert is_achievable(region, c.Q, c.E)
        assert not is_achievable(region, c.Q - 1e-3, c.E)
        assert c.Q >= -1e-7


class TestAchievable:
    def test_w_points(self):
        region = redistribution_region(W4, ABCR)
        # the Q bound is 0.188722, so 0.1887 falls short by far more than the slack
        assert is_achievable(region, 0.1887, 0.0) is False
        assert is_achievable(region, 0.18873, 0.0)
        assert not is_achievable(region, 0.18, 0.0)

    def test_generous_point(self):
        region = redistribution_region(W4, ABCR)
        assert is_achievable(region, 1.0, 5.0)
        assert not is_achievable(region, 1.0, -2.0)


class TestSpecialCases:
    def test_fqsw_bell(self):
        psi = tensor_product(BELL, ket0())  # B, C, R
        part = RolePartition.from_labels("BCR")
        c = fqsw_corner(psi, part)
        assert (c.Q, c.E) == pytest.approx((0, -1), abs=1e-12)

    def test_fqsw_product(self):
        c = fqsw_corner(product(3), RolePartition.from_labels("BCR"))
        assert (c.Q, c.E) == pytest.approx((0, 0), abs=1e-12)

    def test_fqrs_bell(self):
        psi = tensor_product(BELL, ket0())  # A, C, R
        c = fqrs_corner(psi, RolePartition.from_labels("ACR"))
        assert (c.Q, c.E) == pytest.approx((0, 1), abs=1e-12)

    def test_fqrs_product(self):
        c = fqrs_corner(product(3), RolePartition.from_labels("ACR"))
        assert (c.Q, c.E) == pytest.approx((0, 0), abs=1e-12)

    def test_mismatch(self):
        with pytest.raises(TaskMismatchError):
            fqsw_corner(W4, ABCR)
        with pytest.raises(TaskMismatchError):
            fqrs_corner(W4, ABCR)

    @pytest.mark.parametrize("seed", range(30))
    def test_collapse(self, seed):
        sw = RolePartition.from_labels("BCR")
        rs = RolePartition.from_labels("ACR")
        psi = random_pure_state((2, 2, 2), seed)
        assert tuple(redistribution_corner(psi, sw)) == pytest.approx(tuple(fqsw_corner(psi, sw)), abs=1e-9)
        assert tuple(redistribution_corner(psi, rs)) == pytest.approx(tuple(fqrs_corner(psi, rs)), abs=1e-9)

    @pytest.mark.parametrize("seed", range(10))
    def test_fqsw_fqrs_duality(self, seed):
        # the same state read with A and B exchanged flips E
        psi = random_pure_state((2, 2, 3), seed)
        sw = fqsw_corner(psi, RolePartition.from_labels("BCR"))
        rs = fqrs_corner(psi, RolePartition.from_labels("ACR"))
        assert sw.Q == pytest.approx(rs.Q, abs=1e-12)
        assert sw.E == pytest.approx(-rs.E, abs=1e-12)

    def test_special_regions(self):
        psi = random_pure_state((2, 2, 2), 3)
        sw = RolePartition.from_labels("BCR")
        rs = RolePartition.from_labels("ACR")
        ent_sw = RoleEntropies(psi, sw)
        assert fqsw_region(psi, sw).constraints[1].bound == pytest.approx(ent_sw.cond("C", "B"))
        assert fqrs_region(psi, rs).constraints[1].bound == pytest.approx(RoleEntropies(psi, rs).H("C"))
        c = fqsw_corner(psi, sw)
        assert is_achievable(fqsw_region(psi, sw), c.Q, c.E)


class TestMerging:
    def test_bell(self):
        psi = tensor_product(tensor_product(ket0(), BELL), ket0())  # A, B, C, R
        m = merging_costs(psi, ABCR)
        assert (m.ebits, m.cbits) == pytest.approx((-1, 0), abs=1e-12)

    def test_product(self):
        m = merging_costs(product(4), ABCR)
        assert (m.ebits, m.cbits) == pytest.approx((0, 0), abs=1e-12)

    def test_w(self):
        m = merging_costs(W4, ABCR)
        assert m.ebits == pytest.approx(H_C_GIVEN_B_W, abs=1e-12)
        assert m.cbits == pytest.approx(QCMI_W, abs=1e-12)

    @pytest.mark.parametrize("seed", range(30))
    def test_improvement(self, seed):
        psi = random_pure_state((2, 3, 2, 2), seed)
        m = merging_costs(psi, ABCR)
        ent = RoleEntropies(psi, ABCR)
        assert m.cbits <= ent.mi("RA", "C") + 1e-9
        assert m.cbits >= -1e-7


class TestDuality:
    def test_cat(self):
        assert tuple(time_reversal_dual(make_cat(4), ABCR)) == pytest.approx((0, 0), abs=1e-12)

    def test_w(self):
        assert tuple(time_reversal_dual(W4, ABCR)) == pytest.approx((QCMI_W / 2, 0), abs=1e-12)

    @pytest.mark.parametrize("seed", range(30))
    def test_random(self, seed):
        psi = random_pure_state((2, 3, 2, 2), seed)
        fwd = redistribution_corner(psi, ABCR)
        dual = time_reversal_dual(psi, ABCR)
        # independent recomputation: physically swap A and B, keep labels
        swapped = redistribution_corner(permute_subsystems(psi, (1, 0, 2, 3)), ABCR)
        assert dual.Q == pytest.approx(fwd.Q, abs=1e-9)
        assert dual.E == pytest.approx(-fwd.E, abs=1e-9)
        assert tuple(dual) == pytest.approx(tuple(swapped), abs=1e-9)


class TestComposability:
    ABCDR = RolePartition.from_labels("ABCDR")

    def test_product(self):
        rec = composability_check(product(5), self.ABCDR)
        assert tuple(rec.joint) == pytest.approx((0, 0), abs=1e-12)
        assert rec.max_deviation <= 1e-12

    def test_cat(self):
        rec = composability_check(make_cat(5), self.ABCDR)
        assert tuple(rec.joint) == pytest.approx((0, 0), abs=1e-12)
        assert tuple(rec.sequential) == pytest.approx((0, 0), abs=1e-12)

    @pytest.mark.parametrize("seed", range(50))
    def test_random(self, seed):
        rec = composability_check(random_pure_state((2,) * 5, seed), self.ABCDR)
        assert rec.max_deviation <= 1e-9

    def test_joint_is_corner_of_cd(self):
        psi = random_pure_state((2,) * 5, 11)
        rec = composability_check(psi, self.ABCDR)
        merged = RolePartition.from_labels("ABCCR")
        assert tuple(rec.joint) == pytest.approx(tuple(redistribution_corner(psi, merged)), abs=1e-12)

    def test_requires_d(self):
        with pytest.raises(TaskMismatchError):
            composability_check(W4, ABCR)

    def test_d_folds_into_alice(self):
        psi = random_pure_state((2,) * 5, 2)
        a = redistribution_corner(psi, self.ABCDR)
        b = redistribution_corner(psi, RolePartition.from_labels("ABCAR"))
        assert tuple(a) == pytest.approx(tuple(b), abs=1e-15)


def hjpw_sum_oracle(spec):
    return sum(b.p * (subset_entropy(b.phi.amps, b.phi.dims, [0]) - subset_entropy(b.phi.amps, b.phi.dims, [1]))
               for b in spec.blocks)


class TestHjpw:
    def test_single_product_block(self):
        spec = HjpwSpec((HjpwBlock(1.0, random_pure_state((1, 1, 2), 0), random_pure_state((1, 1, 2), 1)),))
        psi, part = make_hjpw(spec)
        c = redistribution_corner(psi, part)
        assert (c.Q, c.E) == pytest.approx((0, 0), abs=1e-12)

    def test_single_bell_block(self):
        bell_ac_c = np.zeros((2, 2, 2))
        bell_ac_c[0, 0, 0] = bell_ac_c[1, 0, 1] = 1 / np.sqrt(2)  # (A_C, B_C, C), B_C in |0>
        spec = HjpwSpec((HjpwBlock(1.0, StateVector(bell_ac_c.reshape(-1), (2, 2, 2)),
                                   random_pure_state((1, 1, 2), 0)),))
        psi, part = make_hjpw(spec)
        c = redistribution_corner(psi, part)
        assert c.E == pytest.approx(1.0, abs=1e-12)
        assert c.Q == pytest.approx(0, abs=1e-12)
        assert hjpw_sum_oracle(spec) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_saturates(self, seed):
        spec = random_hjpw_spec(seed)
        psi, part = make_hjpw(spec)
        ent = RoleEntropies(psi, part)
        assert ent.cmi("C", "R", "B") <= 1e-7
        c = redistribution_corner(psi, part)
        assert abs(c.Q) <= 5e-8
        assert abs(abs(c.E) - abs(hjpw_sum_oracle(spec))) <= 1e-7

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsallisop import linalg, operators, scalar
from tsallisop.errors import DomainError, NotStrictlyPositiveError, ParameterError
from tsallisop.generators import random_orthogonal, random_prob_vector, random_spd
from tsallisop.operators import OperatorPair


def spd_pairs(max_dim=6, cap=1e3):
    return st.tuples(st.integers(1, max_dim), st.integers(0, 2**32 - 1)).map(
        lambda t: (
            random_spd(t[0], cap, np.random.default_rng(t[1])),
            random_spd(t[0], cap, np.random.default_rng(t[1] + 7)),
        )
    )


def scale(*ms):
    return 1 + max(np.abs(m).max() for m in ms)


@pytest.fixture
def pair(rng):
    return random_spd(4, 1e3, rng), random_spd(4, 1e3, rng)


class TestNaturalPower:
    def test_endpoints_exact(self, pair):
        a, b = pair
        np.testing.assert_array_equal(operators.natural_power(a, b, 0), a)
        np.testing.assert_array_equal(operators.natural_power(a, b, 1), b)

    def test_identity_base(self):
        out = operators.natural_power(np.eye(2), np.diag([4.0, 9.0]), 0.5)
        np.testing.assert_allclose(out, np.diag([2.0, 3.0]), rtol=1e-15)

    def test_geometric_mean_of_commuting(self, rng):
        q = random_orthogonal(3, rng)
        a = (q * [1.0, 2.0, 3.0]) @ q.T
        b = (q * [4.0, 0.5, 3.0]) @ q.T
        expect = (q * np.sqrt([4.0, 1.0, 9.0])) @ q.T
        np.testing.assert_allclose(operators.natural_power(a, b, 0.5), expect, atol=1e-13)

    @given(spd_pairs(), st.floats(-2.0, 2.0))
    def test_symmetric_positive(self, ab, lam):
        m = operators.natural_power(*ab, lam)
        np.testing.assert_array_equal(m, m.T)
        assert linalg.min_eigenvalue(m) > 0

    @given(spd_pairs(), st.floats(-1.5, 1.5))
    def test_congruence_equivariance(self, ab, lam):
        a, b = ab
        c = np.diag(np.random.default_rng(int(1e6 * abs(lam))).uniform(0.5, 2.0, a.shape[0]))
        lhs = linalg.congruence(c, operators.natural_power(a, b, lam))
        rhs = operators.natural_power(linalg.congruence(c, a), linalg.congruence(c, b), lam)
        assert np.abs(lhs - rhs).max() <= 1e-9 * scale(lhs, rhs)


class TestTsallisOperator:
    def test_self_is_zero(self, pair):
        a, _ = pair
        assert np.abs(operators.tsallis_operator(a, a, 0.4)).max() < 1e-12

    def test_identity_base(self):
        out = operators.tsallis_operator(np.eye(2), np.diag([4.0, 1.0]), 0.5)
        np.testing.assert_allclose(out, np.diag([2.0, 0.0]), atol=1e-15)

    def test_diagonal_example(self):
        out = operators.tsallis_operator(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]), 0.5)
        # a((b/a)^lam - 1)/lam, 40-digit mpmath
        np.testing.assert_allclose(out, np.diag([-0.29289321881345247560, 0.22474487139158904910]), rtol=1e-14)

    def test_parameter_range(self, pair):
        with pytest.raises(ParameterError):
            operators.tsallis_operator(*pair, 0.0)
        with pytest.raises(ParameterError):
            operators.tsallis_operator(*pair, 1.5)
        with pytest.raises(ParameterError):
            operators.tsallis_operator(*pair, -0.5)
        relaxed = operators.tsallis_operator(*pair, -0.5, relaxed=True)
        np.testing.assert_allclose(relaxed, operators.generalized_tsallis(*pair, 0.0, 1, -0.5), atol=1e-12)
        with pytest.raises(ParameterError):
            operators.tsallis_operator(*pair, 0.0, relaxed=True)

    def test_rejects_non_positive(self):
        with pytest.raises(NotStrictlyPositiveError, match="matrix A not strictly positive"):
            operators.tsallis_operator(np.diag([1.0, -1e-4]), np.eye(2), 0.5)
        with pytest.raises(NotStrictlyPositiveError, match="matrix B"):
            operators.tsallis_operator(np.eye(2), np.diag([1.0, 0.0]), 0.5)
        with pytest.raises(ValueError, match="dimension mismatch"):
            operators.tsallis_operator(np.eye(2), np.eye(3), 0.5)

    @given(spd_pairs(), st.floats(0.01, 1.0))
    def test_upper_bound_b_minus_a(self, ab, lam):
        a, b = ab
        assert linalg.loewner_leq(operators.tsallis_operator(a, b, lam), b - a, 1e-9).holds

    def test_limit_is_linear_in_lambda(self, rng):
        a, b = random_spd(3, 50.0, rng), random_spd(3, 50.0, rng)
        pair = OperatorPair(a, b)
        s = pair.relative_entropy()
        lams = [1e-3 * 0.5**i for i in range(11)]
        errs = [np.abs(pair.tsallis(lam) - s).max() for lam in lams]
        assert errs[-1] < 1e-5
        ratios = [e1 / e0 for e0, e1 in zip(errs, errs[1:])]
        assert all(0.4 <= r <= 0.6 for r in ratios), ratios


class TestRelativeEntropies:
    def test_roe_examples(self, pair):
        a, _ = pair
        assert np.abs(operators.relative_operator_entropy(a, a)).max() < 1e-12
        np.testing.assert_allclose(
            operators.relative_operator_entropy(np.eye(2), np.diag([np.e, 1.0])), np.diag([1.0, 0.0]), atol=1e-15
        )
        np.testing.assert_allclose(
            operators.relative_operator_entropy(2 * np.eye(2), np.eye(2)), -2 * math.log(2) * np.eye(2), rtol=1e-15
        )

    def test_groe_examples(self, pair):
        a, b = pair
        np.testing.assert_array_equal(operators.generalized_roe(a, b, 0), operators.relative_operator_entropy(a, b))
        assert np.abs(operators.generalized_roe(a, a, 1.7)).max() < 1e-12
        np.testing.assert_allclose(
            operators.generalized_roe(np.eye(2), np.diag([np.e, 1.0]), 1), np.diag([np.e, 0.0]), atol=1e-15
        )


class TestGeneralizedTsallis:
    def test_reduces_to_tsallis(self, pair):
        for lam in (0.1, 0.5, 1.0):
            np.testing.assert_allclose(
                operators.generalized_tsallis(*pair, 0.0, 1, lam), operators.tsallis_operator(*pair, lam), atol=1e-13
            )

    def test_closed_forms(self, pair):
        a, b = pair
        b_inv, a_inv = np.linalg.inv(b), np.linalg.inv(a)
        cases = {
            (1, 1.0): b - a,
            (1, -1.0): a - a @ b_inv @ a,
            (2, -1.0): a @ b_inv @ a - a @ b_inv @ a @ b_inv @ a,
            (2, 1.0): b @ a_inv @ b - b,
        }
        for (k, lam), expect in cases.items():
            got = operators.generalized_tsallis(a, b, 0.0, k, lam)
            assert np.abs(got - expect).max() <= 1e-10 * scale(got, expect)

    def test_lambda_zero_rejected(self, pair):
        with pytest.raises(ParameterError):
            operators.generalized_tsallis(*pair, 0.0, 1, 0.0)
        with pytest.raises(ParameterError):
            operators.generalized_tsallis(*pair, 0.0, 1.5, 1.0)

    @given(spd_pairs(), st.floats(0.05, 0.5), st.integers(1, 6))
    def test_telescoping(self, ab, lam, m):
        a, b = ab
        pair = OperatorPair(a, b)
        total = sum(lam * pair.generalized_tsallis(0.0, k, lam) for k in range(1, m + 1))
        expect = pair.natural_power(m * lam) - a
        assert np.abs(total - expect).max() <= 1e-10 * scale(total, expect)

    def test_negative_exponents_accurate_when_ill_conditioned(self):
        # cond(X) ~ 1e8: compare with a 50-digit evaluation
        rng = np.random.default_rng(3)
        q1, q2 = random_orthogonal(4, rng), random_orthogonal(4, rng)
        a = (q1 * [1e-2, 0.3, 5.0, 1e2]) @ q1.T
        b = (q2 * [1e2, 2.0, 0.1, 1e-2]) @ q2.T
        mpmath.mp.dps = 50
        am, bm = mpmath.matrix(a.tolist()), mpmath.matrix(b.tolist())
        aba = am * bm**-1 * am
        ref = np.array((aba - aba * bm**-1 * am).tolist(), dtype=float)
        got = operators.generalized_tsallis(a, b, 0.0, 2, -1.0)
        assert np.abs(got - ref).max() <= 1e-12 * scale(ref)


class TestOracleConsistency:
    @given(st.floats(1e-2, 1e2), st.floats(1e-2, 1e2), st.floats(0.01, 1.0))
    def test_one_by_one(self, a, b, lam):
        am, bm = np.array([[a]]), np.array([[b]])
        x = math.log(b / a)
        t_ref = a * math.expm1(lam * x) / lam
        assert operators.tsallis_operator(am, bm, lam)[0, 0] == pytest.approx(t_ref, rel=1e-13, abs=1e-300)
        assert operators.relative_operator_entropy(am, bm)[0, 0] == pytest.approx(a * x, rel=1e-13, abs=1e-300)

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_commuting_matches_entrywise(self, n, seed):
        rng = np.random.default_rng(seed)
        da, db = np.exp(rng.uniform(-2, 2, n)), np.exp(rng.uniform(-2, 2, n))
        q = random_orthogonal(n, rng)
        a, b = (q * da) @ q.T, (q * db) @ q.T
        x = np.log(db / da)
        pair = OperatorPair(a, b)
        for got, values in (
            (pair.tsallis(0.3), da * np.expm1(0.3 * x) / 0.3),
            (pair.relative_entropy(), da * x),
            (pair.generalized_relative_entropy(-1.5), da * np.exp(-1.5 * x) * x),
            (pair.generalized_tsallis(0.5, 2, -0.5), da * (np.exp(-0.5 * x) - np.exp(0.0 * x)) / -0.5),
        ):
            expect = (q * values) @ q.T
            assert np.abs(got - expect).max() <= 1e-12 * scale(expect)


class TestQuantumTsallis:
    def test_self_and_q_zero(self, rng):
        q = random_orthogonal(3, rng)
        rho = (q * [0.2, 0.3, 0.5]) @ q.T
        sigma = random_spd(3, 10.0, rng)
        sigma /= np.trace(sigma)
        assert abs(operators.quantum_tsallis(rho, rho, 0.4)) < 1e-14
        assert abs(operators.quantum_tsallis(rho, sigma, 0.0)) < 1e-14

    def test_commuting_example(self):
        val = operators.quantum_tsallis(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]), 0.5)
        assert val == pytest.approx(0.06814834742186342650, rel=1e-14)

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(0.0, 0.99))
    def test_commuting_equals_dq(self, n, seed, q):
        rng = np.random.default_rng(seed)
        a, b = random_prob_vector(n, rng), random_prob_vector(n, rng)
        u = random_orthogonal(n, rng)
        rho, sigma = (u * a) @ u.T, (u * b) @ u.T
        if n == 1 or q == 1:
            return
        assert abs(operators.quantum_tsallis(rho, sigma, q) - scalar.dq_statistical(a, b, q)) <= 1e-12

    def test_validation(self):
        with pytest.raises(DomainError, match="unit trace"):
            operators.quantum_tsallis(np.eye(2), np.eye(2) / 2, 0.5)
        with pytest.raises(ParameterError):
            operators.quantum_tsallis(np.eye(2) / 2, np.eye(2) / 2, 1.0)
        with pytest.raises(NotStrictlyPositiveError):
            operators.quantum_tsallis(np.diag([1.0, 0.0]), np.eye(2) / 2, 0.5)

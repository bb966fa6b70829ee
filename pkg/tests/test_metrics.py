from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import auc_apfd
from tcp_aga.coverage import FaultMatrix, PrioritizedOrder
from tcp_aga.metrics import apfd, speedup
from tcp_aga.prioritizers import ga_naive


@st.composite
def scored_orders(draw, max_tests=12, max_faults=6):
    n = draw(st.integers(1, max_tests))
    order = draw(st.permutations(range(n)))
    faults = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=max_faults))
    return list(order), FaultMatrix(n, tuple(tuple(f) for f in faults))


class TestApfd:
    def test_single_test(self):
        result = apfd([0], FaultMatrix(1, ((0,),)))
        assert result.value == 0.5
        assert result.first_detect_positions == (1,)

    def test_positions_one_and_three(self):
        result = apfd(PrioritizedOrder((0, 1, 2, 3, 4)), FaultMatrix(5, ((0,), (2,))))
        assert result.first_detect_positions == (1, 3)
        assert result.value == pytest.approx(0.7, abs=1e-15)

    def test_table1_ga_order(self, table1):
        faults = FaultMatrix(5, ((1,), (4,)))
        result = apfd(ga_naive(table1), faults)
        assert result.first_detect_positions == (2, 5)
        assert result.value == pytest.approx(0.4, abs=1e-15)

    def test_earliest_detector_counts(self):
        result = apfd([3, 0, 1, 2], FaultMatrix(4, ((0, 1, 2),)))
        assert result.first_detect_positions == (2,)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="order has 2 tests"):
            apfd([0, 1], FaultMatrix(3, ((0,),)))

    def test_not_a_permutation(self):
        with pytest.raises(ValueError, match="permutation"):
            apfd([0, 0], FaultMatrix(2, ((0,),)))

    def test_fault_without_detector_rejected(self):
        with pytest.raises(ValueError):
            FaultMatrix(2, ((),))

    @given(scored_orders())
    def test_matches_area_oracle(self, case):
        order, faults = case
        result = apfd(order, faults)
        expected = auc_apfd(order, [set(f) for f in faults.detecting_tests])
        assert abs(result.value - float(expected)) <= 1e-12
        n = faults.num_tests
        assert 1 / (2 * n) <= result.value <= (2 * n - 1) / (2 * n)

    @given(scored_orders())
    def test_recomputable_from_positions(self, case):
        order, faults = case
        result = apfd(order, faults)
        n, f = faults.num_tests, faults.num_faults
        assert all(1 <= tf <= n for tf in result.first_detect_positions)
        expected = 1 - sum(result.first_detect_positions) / (n * f) + 1 / (2 * n)
        assert result.value == pytest.approx(expected, abs=1e-12)

    @given(scored_orders(max_faults=1))
    def test_reversal_symmetry(self, case):
        # one sole detector at p moves to n + 1 - p: the two values sum to 1
        order, faults = case
        faults = FaultMatrix(faults.num_tests, (faults.detecting_tests[0][:1],))
        total = apfd(order, faults).value + apfd(order[::-1], faults).value
        assert total == pytest.approx(1.0, abs=1e-12)

    @given(scored_orders(max_faults=4), st.data())
    def test_moving_sole_detector_earlier(self, case, data):
        order, _ = case
        n = len(order)
        test = data.draw(st.sampled_from(order))
        faults = FaultMatrix(n, ((test,),))
        pos = order.index(test)
        target = data.draw(st.integers(0, pos))
        moved = order[:pos] + order[pos + 1:]
        moved.insert(target, test)
        assert apfd(moved, faults).value >= apfd(order, faults).value


class TestSpeedup:
    def test_basic(self):
        assert speedup(10.0, 2.0) == 5.0
        assert speedup(3.3, 3.3) == 1.0

    def test_reported_pair(self):
        assert speedup(0.0197, 0.0157) == pytest.approx(1.2548, abs=5e-5)

    @pytest.mark.parametrize("a, b", [(0, 1), (1, 0), (-1, 1)])
    def test_non_positive(self, a, b):
        with pytest.raises(ValueError):
            speedup(a, b)

from __future__ import annotations

import json

import numpy as np
import pytest

from tcp_aga.bench import (
    GenSpec,
    apfd_range,
    generate,
    iteration_sweep,
    median_seconds,
    order_digest,
    run_bench,
    sweep_csv,
    synthetic_faults,
)
from tcp_aga.coverage import CoverageData, FaultMatrix, to_adjacency_list
from tcp_aga.prioritizers import aga_c


class TestGenerate:
    def test_density_one_is_full(self):
        cov = generate(GenSpec(5, 5, 1.0, seed=3))
        assert cov.to_matrix().all()

    def test_empty(self):
        cov = generate(GenSpec(0, 0, 0.5))
        assert cov.num_tests == 0 and cov.num_elements == 0

    def test_layered_example(self):
        cov = generate(GenSpec(100, 400, 0.05, "layered", 8, seed=7))
        assert 6 <= aga_c(cov).num_iterations <= 10

    # block structure dominates the noise in all of these
    @pytest.mark.parametrize("m, n, density, k", [
        (100, 400, 0.05, 8),
        (100, 400, 0.12, 8),
        (200, 400, 0.1, 12),
        (150, 600, 0.05, 15),
        (300, 1000, 0.05, 20),
        (500, 2000, 0.02, 40),
        (400, 1000, 0.05, 10),
    ])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_layered_hits_target(self, m, n, density, k, seed):
        cov = generate(GenSpec(m, n, density, "layered", k, seed=seed))
        assert abs(aga_c(cov).num_iterations - k) <= 0.2 * k

    def test_deterministic(self):
        spec = GenSpec(40, 60, 0.1, "layered", 4, seed=2**63 + 5)
        assert to_adjacency_list(generate(spec)) == to_adjacency_list(generate(spec))

    def test_seed_matters(self):
        assert generate(GenSpec(40, 60, 0.1, seed=1)) != generate(GenSpec(40, 60, 0.1, seed=2))

    @pytest.mark.parametrize("kwargs", [
        dict(density=0.0), dict(density=1.5), dict(shape="zigzag"),
        dict(shape="layered", target_k=0), dict(seed=-1), dict(seed=2**64),
    ])
    def test_invalid_spec(self, kwargs):
        with pytest.raises(ValueError):
            GenSpec(10, 10, **{"density": 0.5, **kwargs})


class TestSyntheticFaults:
    def test_detectors_cover_the_fault_element(self):
        cov = generate(GenSpec(30, 50, 0.1, seed=4))
        faults = synthetic_faults(cov, 20, seed=1)
        matrix = cov.to_matrix()
        assert faults.num_faults == 20
        for tests in faults.detecting_tests:
            shared = np.logical_and.reduce(matrix[list(tests)], axis=0)
            assert shared.any()

    def test_no_coverage(self):
        with pytest.raises(ValueError):
            synthetic_faults(CoverageData.from_lists([[]], 2), 1)


class TestRunBench:
    def test_table1(self, table1):
        reports = run_bench(table1, ["ga", "aga-c"], 3)
        assert len(reports) == 6
        assert len({r.order_digest for r in reports}) == 1
        assert all(r.prioritize_seconds > 0 for r in reports)

    def test_gt_single_pass(self):
        cov = generate(GenSpec(20, 30, 0.2, seed=1))
        (report,) = run_bench(cov, ["gt"], 1)
        assert report.iteration_count == 1

    def test_unknown_algorithm(self, table1):
        with pytest.raises(KeyError):
            run_bench(table1, ["nosuch"], 1)

    def test_reps_validated(self, table1):
        with pytest.raises(ValueError):
            run_bench(table1, ["ga"], 0)

    def test_json_line(self, table1):
        (report,) = run_bench(table1, ["aga"], 1, parse_seconds=0.25)
        record = json.loads(report.to_json())
        assert set(record) == {"algorithm", "rep", "parse_s", "prioritize_s", "iterations",
                               "tc_updates", "order_digest"}
        assert record["parse_s"] == 0.25 and record["iterations"] == 2
        assert record["order_digest"] == order_digest((0, 1, 2, 3, 4))
        int(record["order_digest"], 16)

    def test_digest_is_stable(self):
        assert order_digest([0, 1, 2]) == order_digest((0, 1, 2))
        assert order_digest([0, 1, 2]) != order_digest([0, 2, 1])
        assert len(order_digest([])) == 16

    def test_median(self, table1):
        reports = run_bench(table1, ["gt", "ga"], 3)
        assert median_seconds(reports, "gt") > 0


class TestIterationSweep:
    def test_table1(self, table1):
        faults = FaultMatrix(5, ((1,), (4,)))
        rows = iteration_sweep(table1, faults)
        assert [r.iteration for r in rows] == [1, 2]
        assert rows[0].order == rows[1].order
        assert rows[0].apfd == rows[1].apfd
        assert apfd_range(rows) == 0.0

    def test_single_test(self):
        rows = iteration_sweep(CoverageData.from_lists([[0]], 1))
        assert len(rows) == 1 and rows[0].apfd is None

    def test_csv(self, table1):
        text = sweep_csv(iteration_sweep(table1))
        lines = text.splitlines()
        assert lines[0] == "iteration,time_s,apfd"
        assert [line.split(",")[0] for line in lines[1:]] == ["1", "2"]
        assert all(line.endswith(",") for line in lines[1:])

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_late_window_range_is_smaller(self, seed):
        cov = generate(GenSpec(144, 300, 0.1, "layered", 12, seed=seed))
        faults = synthetic_faults(cov, 15, seed=seed)
        rows = iteration_sweep(cov, faults)
        late = [r for r in rows if 10 <= r.iteration <= 12]
        assert apfd_range(late) <= apfd_range(rows)


@pytest.mark.slow
def test_naive_time_grows_faster_than_accelerated():
    medians = {"ga": [], "aga-c": []}
    for m in (500, 1000, 2000):
        cov = generate(GenSpec(m, 4000, 0.02, "layered", 10, seed=m))
        reports = run_bench(cov, ["ga", "aga-c"], 5)
        for name in medians:
            medians[name].append(median_seconds(reports, name))
    ratios = {name: [b / a for a, b in zip(v, v[1:])] for name, v in medians.items()}
    assert all(g > a for g, a in zip(ratios["ga"], ratios["aga-c"])), ratios

"""Rotating rank-2 experiment: system construction, ground truth, the two
rank policies and the CSV round trip."""

import numpy as np
import pytest

from scinv import simlab
from scinv.simlab import (
    MODE_FIXED_RANK,
    MODE_THRESHOLD,
    SimConfig,
    SimRecord,
    build_system,
    ground_truth_sc,
    random_nonsingular_s,
    read_csv,
    run_experiment,
    summarize,
    write_csv,
)


class TestSystem:
    def test_rank_two_at_every_angle(self):
        s = random_nonsingular_s(1)
        for t in np.linspace(0, 2 * np.pi, 17):
            m = build_system(s, t)
            assert np.linalg.matrix_rank(m) == 2

    def test_never_diagonalizable(self):
        s = random_nonsingular_s(2)
        m = build_system(s, 0.7)
        # eigenvalue 1 has algebraic multiplicity 2 but a 1-d eigenspace
        assert np.linalg.matrix_rank(m - np.eye(3)) == 2

    def test_ground_truth_identity_s(self):
        g = ground_truth_sc(np.eye(3), 0.0)
        expected = np.array([[1.0, -1, 0], [0, 1, 0], [0, 0, 0]])
        assert np.abs(g - expected).max() < 1e-14

    def test_ground_truth_is_sc_witness(self):
        s = random_nonsingular_s(3)
        m = build_system(s, 1.3)
        g = ground_truth_sc(s, 1.3)
        assert np.abs(m @ g @ m - m).max() < 1e-8
        assert np.abs(g @ m @ g - g).max() < 1e-8

    def test_singular_s_rejected(self):
        with pytest.raises(ValueError):
            build_system(np.zeros((3, 3)), 0.0)


class TestConfig:
    def test_validation(self):
        s = random_nonsingular_s(1)
        with pytest.raises(ValueError):
            SimConfig(s_matrix=s, steps=0)
        with pytest.raises(ValueError):
            SimConfig(s_matrix=s, mode="bogus")
        with pytest.raises(ValueError):
            SimConfig(s_matrix=np.eye(2))

    def test_random_s_deterministic(self):
        a, b = random_nonsingular_s(5), random_nonsingular_s(5)
        assert np.array_equal(a, b)
        assert abs(np.linalg.det(a)) >= 1
        assert np.abs(a).max() <= 9


class TestExperiment:
    def test_fixed_rank_short_run(self):
        cfg = SimConfig(s_matrix=random_nonsingular_s(1), steps=40, mode=MODE_FIXED_RANK)
        records = run_experiment(cfg)
        assert len(records) == 40
        assert records[0].t == 0.0
        summary = summarize(records)
        assert summary.max_err < 1e-8
        assert summary.spike_count == 0

    def test_threshold_can_spike(self):
        # seed 1 is a known spiking configuration for the threshold policy
        cfg = SimConfig(s_matrix=random_nonsingular_s(1), steps=300, mode=MODE_THRESHOLD)
        summary = summarize(run_experiment(cfg))
        assert summary.spike_count > 0
        assert summary.max_err > 1e6

    def test_summarize_empty_raises(self):
        with pytest.raises(ValueError):
            summarize([])


class TestCsv:
    def test_round_trip(self, tmp_path):
        records = [
            SimRecord(t=0.0, err=1.5e-12, chain_failed=False),
            SimRecord(t=0.5, err=2.0e15, chain_failed=True),
        ]
        path = tmp_path / "run.csv"
        write_csv(records, path)
        back = read_csv(path)
        assert back == records
        header = path.read_text().splitlines()[0]
        assert header == "t,err,chain_failed"

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            read_csv(path)

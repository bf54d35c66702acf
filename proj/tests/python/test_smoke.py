import math

import numpy as np
import pytest

import fbmlab


def test_covariance_closed_form():
    assert fbmlab.fbm_covariance(0.75, 1.0, 2.0) == pytest.approx(
        1.4142135623730951, abs=1e-15
    )
    assert fbmlab.fbm_covariance(0.5, 0.3, 0.8) == pytest.approx(0.3, abs=1e-15)
    with pytest.raises(ValueError):
        fbmlab.fbm_covariance(1.5, 1.0, 1.0)


def test_partition_basics():
    part = fbmlab.Partition.uniform(1.0, 8)
    assert part.steps() == 8
    assert len(part) == 8
    assert part.mesh() == pytest.approx(0.125)
    assert part.floor_index(0.3) == 2
    times = part.times()
    assert times[0] == 0.0 and times[-1] == 1.0
    fine = fbmlab.Partition.uniform(1.0, 16)
    assert fine.refines(part)
    assert not part.refines(fine)


def test_brownian_increments_are_independent():
    part = fbmlab.Partition.uniform(1.0, 4)
    cov = fbmlab.increment_covariance(0.5, part)
    assert cov.shape == (4, 4)
    assert np.allclose(np.diag(cov), 0.25, atol=1e-15)
    off = cov - np.diag(np.diag(cov))
    assert np.max(np.abs(off)) <= 1e-12


def test_brownian_weights_vanish():
    part = fbmlab.Partition.uniform(1.0, 16)
    w, v = fbmlab.predictor_weights(0.5, part)
    assert np.max(np.abs(w)) == 0.0
    assert np.allclose(v, 1.0 / 16.0, atol=1e-15)
    assert fbmlab.jacod_sum(0.5, part, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_sampling_is_deterministic():
    part = fbmlab.Partition.uniform(1.0, 8)
    a = fbmlab.sample_increments(0.75, part, 32, 7)
    b = fbmlab.sample_increments(0.75, part, 32, 7)
    assert a.shape == (32, 8)
    assert np.array_equal(a, b)
    c = fbmlab.sample_increments(0.75, part, 32, 8)
    assert not np.array_equal(a, c)


def test_decompose_bookkeeping():
    part = fbmlab.Partition.uniform(1.0, 8)
    dx = fbmlab.sample_increments(0.75, part, 1, 3)[0]
    x = np.concatenate([[0.0], np.cumsum(dx)])
    a, m = fbmlab.decompose(0.75, part, x)
    assert a.shape == m.shape == x.shape
    assert a[0] == 0.0
    assert np.array_equal(m, x - a)

    a0, m0 = fbmlab.decompose(0.5, part, x)
    assert np.all(a0 == 0.0)
    assert np.array_equal(m0, x)


def test_quadratic_variation():
    assert fbmlab.quadratic_variation([0.0, 1.0, 0.0]) == 2.0


def test_run_experiment_reports():
    report = fbmlab.run_experiment("martingale", hurst=0.5, levels="2:4", paths=50)
    assert report["violations"] == []
    assert report["manifest"]["command"] == "martingale"
    assert report["manifest"]["config"]["paths"] == 50
    assert len(report["levels"]) == 3
    for rec in report["levels"]:
        assert rec["var_AT"] == 0.0
        assert rec["jacod_T"] == pytest.approx(1.0, abs=1e-15)

    with pytest.raises(ValueError):
        fbmlab.run_experiment("explode", hurst=0.75, levels="2:3", paths=10)


def test_version_present():
    assert fbmlab.__version__ == "0.1.0"

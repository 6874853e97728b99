import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qassess.calibration import (
    CalibrationError,
    CalibrationSample,
    calibrate,
    calibration_report,
    quartile,
    read_baseline_csv,
)


def fence_oracle(values, iqr_basis="nonzero"):
    """Brute-force thresholds: numpy percentiles, explicit scan over every value."""
    v = np.asarray(values, dtype=float)
    if np.count_nonzero(v > 0) < 5:
        return 0.0, 1e-8
    nz = v[v != 0]
    q1, q3 = np.percentile(nz, 25), np.percentile(nz, 75)
    iqr = q3 - q1 if iqr_basis == "nonzero" else np.percentile(v, 75) - np.percentile(v, 25)
    upper, lower = q3 + 1.5 * iqr, q1 - 1.5 * iqr
    best_hi, best_lo = None, None
    for x in v:
        if x <= upper and (best_hi is None or x > best_hi):
            best_hi = x
        if x >= lower and (best_lo is None or x < best_lo):
            best_lo = x
    return float(best_lo), float(best_hi)


@pytest.mark.parametrize("values, p, expected", [
    ([1, 2, 3, 4, 5], 0.25, 2.0),
    ([7], 0.75, 7.0),
    ([1, 2, 3, 4], 0.75, 3.25),
    ([4, 1, 3, 2], 0.75, 3.25),
])
def test_quartile_examples(values, p, expected):
    assert quartile(values, p) == expected


def test_quartile_empty():
    with pytest.raises(ValueError):
        quartile([], 0.25)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40), st.sampled_from([0.25, 0.5, 0.75]))
def test_quartile_matches_numpy_linear(values, p):
    assert quartile(values, p) == pytest.approx(float(np.percentile(values, 100 * p)), rel=1e-9, abs=1e-9)


def sample(values, mid="m"):
    return CalibrationSample(mid, tuple(values))


def test_jump_branch_for_sparse_measure():
    cal = calibrate(sample([0.0] * 10 + [3e-6, 5e-6]))
    assert (cal.min, cal.max) == (0.0, 1e-8)
    assert cal.stats.n_nonzero == 2


def test_evenly_spread_sample():
    values = [0, 1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 6e-6, 7e-6, 8e-6, 9e-6]
    cal = calibrate(sample(values))
    # zero lies inside the lower fence, so it is the smallest non-outlier
    assert (cal.min, cal.max) == fence_oracle(values) == (0.0, 9e-6)
    assert cal.stats.q1 == pytest.approx(3e-6) and cal.stats.q3 == pytest.approx(7e-6)


def test_outlier_above_fence_excluded():
    values = [0, 1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 6e-6, 7e-6, 8e-6, 9e-6, 1.0]
    cal = calibrate(sample(values))
    assert cal.max == 9e-6
    assert (cal.min, cal.max) == fence_oracle(values)


def test_all_positive_sample_uses_smallest_non_outlier():
    values = [1e-6 * k for k in range(1, 11)]
    cal = calibrate(sample(values))
    assert (cal.min, cal.max) == (values[0], values[-1])


def test_too_few_systems():
    with pytest.raises(CalibrationError, match="too-few-systems"):
        sample([1.0] * 9)


def test_degenerate_thresholds():
    with pytest.raises(CalibrationError, match="degenerate-thresholds"):
        calibrate(sample([5.0] * 10))


def test_iqr_basis_all_differs_when_zeros_dominate():
    values = [0.0] * 6 + [1.0, 2.0, 3.0, 4.0, 100.0]
    assert calibrate(sample(values)).max == 4.0
    # over all values the IQR is wider and 100 stays an outlier only with the narrower basis
    assert (calibrate(sample(values), "all").min, calibrate(sample(values), "all").max) == fence_oracle(values, "all")


positive_samples = st.lists(
    st.one_of(st.just(0.0), st.floats(1e-9, 1e3, allow_subnormal=False)), min_size=10, max_size=40)


@settings(max_examples=300, deadline=None)
@given(positive_samples)
def test_calibration_properties(values):
    n_pos = sum(v > 0 for v in values)
    try:
        cal = calibrate(sample(values))
    except CalibrationError as exc:
        assert exc.code == "degenerate-thresholds"
        lo, hi = fence_oracle(values)
        assert lo == hi
        return
    assert (cal.min, cal.max) == fence_oracle(values)
    assert cal.is_jump == (n_pos < 5)
    assert 0 <= cal.min <= cal.max
    if not cal.is_jump:
        assert cal.min in values and cal.max in values
    assert cal.stats.q1 <= cal.stats.q3 and cal.stats.iqr >= 0


@settings(max_examples=200, deadline=None)
@given(positive_samples, st.integers(-20, 20), st.randoms(use_true_random=False))
def test_scaling_and_permutation(values, exponent, rnd):
    try:
        base = calibrate(sample(values))
    except CalibrationError:
        return
    c = 2.0 ** exponent  # exact scaling keeps every comparison identical
    scaled = calibrate(sample([c * v for v in values]))
    if base.is_jump:
        assert scaled.is_jump
    else:
        assert (scaled.min, scaled.max) == (c * base.min, c * base.max)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    assert calibrate(sample(shuffled)) == base


def test_baseline_csv_and_report(tmp_path):
    path = tmp_path / "baseline.csv"
    rows = ["system,a.M,a.N"] + [f"s{i},{i * 1e-6},{'' if i == 3 else i}" for i in range(12)]
    path.write_text("\n".join(rows) + "\n")
    samples = {s.measure_id: s for s in read_baseline_csv(path)}
    assert len(samples["a.M"].values) == 12 and len(samples["a.N"].values) == 11
    doc = calibration_report({k: calibrate(s) for k, s in samples.items()})
    assert doc["iqrBasis"] == "nonzero"
    assert [r["measureId"] for r in doc["measures"]] == ["a.M", "a.N"]
    assert set(doc["measures"][0]) >= {"min", "max", "q1", "q3", "iqr", "nNonzero"}


def test_baseline_csv_bad_header(tmp_path):
    path = tmp_path / "b.csv"
    path.write_text("name,a\n")
    with pytest.raises(ValueError, match="header"):
        read_baseline_csv(path)

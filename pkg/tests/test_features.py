import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from examstress.errors import EmptyInput, IncompleteSession, InvalidSample
from examstress.features import FEATURE_NAMES, binarize_label, build_examples, build_supervector, summary_stats
from examstress.ingest import RawRecording, SignalKind
from examstress.preprocess import NormScope, PreprocessConfig, preprocess_all


def test_summary_stats_example():
    mean, std, lo, hi, med = summary_stats([1, 2, 3, 4, 5])
    assert (mean, lo, hi, med) == (3.0, 1.0, 5.0, 3.0)
    assert std == pytest.approx(math.sqrt(2), abs=1e-12)


def test_summary_stats_single_and_even():
    assert summary_stats([2.5]) == (2.5, 0.0, 2.5, 2.5, 2.5)
    assert summary_stats([4, 1, 3, 2])[4] == 2.5


def test_summary_stats_errors():
    with pytest.raises(EmptyInput):
        summary_stats([])
    with pytest.raises(InvalidSample):
        summary_stats([1.0, float("nan")])


values = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=50)


@given(values, st.randoms())
def test_permutation_invariant(x, rnd):
    y = list(x)
    rnd.shuffle(y)
    a, b = summary_stats(x), summary_stats(y)
    assert a[2:] == b[2:]
    assert a[0] == pytest.approx(b[0], rel=1e-12, abs=1e-6)
    assert a[1] == pytest.approx(b[1], rel=1e-9, abs=1e-6)


@given(st.lists(st.integers(-1000, 1000), min_size=1, max_size=40), st.integers(1, 8), st.integers(-50, 50))
def test_affine_equivariance(x, a, b):
    # integer data and small multipliers keep every statistic exact except the std
    x = np.array(x, dtype=float)
    s = summary_stats(x)
    t = summary_stats(a * x + b)
    assert t[0] == pytest.approx(a * s[0] + b, rel=1e-12, abs=1e-9)
    assert t[1] == pytest.approx(a * s[1], rel=1e-9, abs=1e-9)
    assert t[2:] == (a * s[2] + b, a * s[3] + b, a * s[4] + b)


@given(values)
def test_order_invariants(x):
    mean, std, lo, hi, med = summary_stats(x)
    assert lo <= med <= hi and lo <= mean <= hi and std >= 0


def _constant(c):
    return {k: RawRecording(k, 0.0, 1.0, np.full(7, c)) for k in SignalKind}


def test_supervector_constant_blocks():
    v = build_supervector(_constant(3.0))
    assert v.tolist() == [3.0, 0.0, 3.0, 3.0, 3.0] * 3


def test_supervector_ignores_insertion_order(cohort):
    [cs] = preprocess_all(cohort[:3])[:1]
    recs = cs.recordings
    shuffled = {k: recs[k] for k in reversed(list(recs))}
    assert np.array_equal(build_supervector(recs), build_supervector(shuffled))


def test_supervector_matches_manual_concatenation(cohort):
    for cs in preprocess_all(cohort):
        manual = []
        for k in (SignalKind.SkinTemperature, SignalKind.HeartRate, SignalKind.ElectrodermalActivity):
            manual.extend(summary_stats(cs.recordings[k].samples))
        assert build_supervector(cs.recordings).tolist() == manual


def test_supervector_missing_signal():
    recs = _constant(1.0)
    del recs[SignalKind.HeartRate]
    with pytest.raises(IncompleteSession):
        build_supervector(recs)


def test_per_session_mode_pins_mean_and_std(cohort):
    for cs in preprocess_all(cohort, PreprocessConfig(5, NormScope.PerSessionSignal)):
        v = build_supervector(cs.recordings)
        assert np.all(np.abs(v[[0, 5, 10]]) < 1e-9)
        assert np.all(np.abs(v[[1, 6, 11]] - 1) < 1e-9)


def test_feature_names():
    assert len(FEATURE_NAMES) == 15
    assert FEATURE_NAMES[0] == "temp_mean" and FEATURE_NAMES[-1] == "eda_median"


@pytest.mark.parametrize("pct,expected", [(80.0, False), (80.5, True), (0.0, False), (100.0, True)])
def test_binarize_label(pct, expected):
    assert binarize_label(pct, 80) is expected


def test_build_examples_labels(cohort):
    examples = build_examples(preprocess_all(cohort), cohort, threshold=80)
    assert len(examples) == 30
    for e in examples:
        assert e.label == (e.percent > 80)
        assert e.features.shape == (15,) and np.all(np.isfinite(e.features))

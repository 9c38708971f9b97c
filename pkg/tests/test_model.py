import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gazekit.errors import InputError, NonMonotonicTimestamp, NonPositiveThreshold
from gazekit.model import (
    Algorithm,
    GazeSample,
    GazeSeries,
    Label,
    LabelSeries,
    ThresholdConfig,
    TimeUnit,
)

from conftest import gaze_series, label_series


def test_label_is_two_valued():
    assert [lab.token for lab in Label] == ["F", "S"]


def test_time_unit_scale():
    assert TimeUnit.PER_MS.ms_per_unit == 1.0
    assert TimeUnit.PER_S.ms_per_unit == 1000.0


@pytest.mark.parametrize("t", [[0, 2, 1], [0, 1, 1], [3, 2]])
def test_series_rejects_non_increasing_time(t):
    with pytest.raises(NonMonotonicTimestamp):
        GazeSeries(t, np.zeros(len(t)), np.zeros(len(t)))


def test_series_reports_offending_position():
    with pytest.raises(NonMonotonicTimestamp) as info:
        GazeSeries([0, 2, 1], [0, 0, 0], [0, 0, 0])
    assert info.value.line == 3


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_series_rejects_non_finite_positions(bad):
    with pytest.raises(InputError):
        GazeSeries([0, 1], [0, bad], [0, 0])
    with pytest.raises(InputError):
        GazeSample(0.0, 0.0, bad)


def test_series_arrays_are_read_only():
    s = GazeSeries([0, 1], [0, 1], [0, 1])
    with pytest.raises(ValueError):
        s.x[0] = 5


def test_series_from_samples_matches_columns():
    samples = [GazeSample(0.0, 1.0, 2.0), GazeSample(1.0, 3.0, 4.0)]
    s = GazeSeries.from_samples(samples)
    assert s.samples == samples
    assert list(s) == samples


def test_label_series_rejects_other_codes():
    with pytest.raises(InputError):
        LabelSeries(np.array([0, 2]))


def test_label_series_constructors_agree():
    a = LabelSeries.from_tokens("FFSF")
    b = LabelSeries.from_labels([Label.FIXATION, Label.FIXATION, Label.SACCADE, Label.FIXATION])
    c = LabelSeries.from_saccade_mask(np.array([False, False, True, False]))
    assert a == b == c
    assert a.n_saccade == 1 and a.n_fixation == 3
    assert a[2] is Label.SACCADE
    assert a.flipped().tokens() == list("SSFS")


def test_threshold_config_validation():
    with pytest.raises(NonPositiveThreshold):
        ThresholdConfig(Algorithm.IVT, 0.0)
    with pytest.raises(NonPositiveThreshold):
        ThresholdConfig(Algorithm.IDT, 5.0, t_min_ms=0.0)
    assert ThresholdConfig("idt", 5.0).t_min_ms == 50.0


@given(gaze_series())
def test_series_round_trip(series):
    back = GazeSeries.from_dict(json.loads(json.dumps(series.to_dict())))
    assert back == series


@given(label_series())
def test_labels_round_trip(labels):
    assert LabelSeries.from_dict(json.loads(json.dumps(labels.to_dict()))) == labels


@given(
    st.floats(allow_nan=False, allow_infinity=False),
    st.floats(allow_nan=False, allow_infinity=False),
    st.floats(allow_nan=False, allow_infinity=False),
)
def test_sample_round_trip(t, x, y):
    s = GazeSample(t, x, y)
    assert GazeSample.from_dict(json.loads(json.dumps(s.to_dict()))) == s


@given(
    st.sampled_from(list(Algorithm)),
    st.floats(1e-6, 1e6),
    st.floats(1e-3, 1e4),
)
def test_threshold_config_round_trip(alg, value, t_min):
    cfg = ThresholdConfig(alg, value, t_min)
    assert ThresholdConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg

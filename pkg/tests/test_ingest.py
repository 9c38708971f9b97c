import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from gazekit.errors import (
    EmptySeries,
    InputError,
    MalformedRow,
    MissingLabelColumn,
    NonMonotonicTimestamp,
    UnknownLabelToken,
)
from gazekit.ingest import (
    ColumnMap,
    IngestPolicy,
    MissingPolicy,
    fmt,
    labels_to_csv,
    parse_csv,
    parse_ground_truth,
    parse_labeled_csv,
    read_label_file,
    series_to_csv,
    write_series_csv,
)
from gazekit.model import GazeSeries, LabelSeries

from conftest import gaze_series

HEADERLESS = ColumnMap(has_header=False)


@pytest.fixture
def write(tmp_path):
    def _write(text, name="data.csv"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    return _write


def test_three_rows(write):
    s = parse_csv(write("0,100,100\n1,101,100\n2,101,101\n"), HEADERLESS)
    assert s.t.tolist() == [0, 1, 2]
    assert s.x.tolist() == [100, 101, 101] and s.y.tolist() == [100, 100, 101]


def test_header_comments_and_blank_lines(write):
    s = parse_csv(write("# exported\nt_ms,x_px,y_px\n\n0,1,2\n# pause\n5,3,4\n"))
    assert s.t.tolist() == [0, 5]


def test_drop_missing_positions(write):
    s = parse_csv(write("0,1,1\n1,NaN,1\n2,3,3\n3,,4\n4,5,5\n"), HEADERLESS)
    assert s.t.tolist() == [0, 2, 4]
    assert s.x.tolist() == [1, 3, 5]


def test_fail_on_missing_reports_line(write):
    with pytest.raises(MalformedRow) as info:
        parse_csv(write("t,x,y\n0,1,1\n1,nan,1\n"), policy=IngestPolicy(MissingPolicy.FAIL))
    assert info.value.line == 3


def test_interpolate_short_gaps_only(write):
    text = "0,0,0\n1,,\n2,2,4\n3,nan,nan\n500,8,8\n"
    s = parse_csv(write(text), HEADERLESS, IngestPolicy(MissingPolicy.INTERPOLATE, max_gap_ms=10))
    # the gap around t=3 spans 498 ms and is dropped instead
    assert s.t.tolist() == [0, 1, 2, 500]
    assert s.x.tolist() == [0, 1, 2, 8] and s.y.tolist() == [0, 2, 4, 8]


def test_interpolate_needs_positive_gap():
    with pytest.raises(InputError):
        IngestPolicy(MissingPolicy.INTERPOLATE, max_gap_ms=0)


def test_non_monotonic_line_numbers(write):
    with pytest.raises(NonMonotonicTimestamp) as info:
        parse_csv(write("0,0,0\n2,0,0\n1,0,0\n"), HEADERLESS)
    assert info.value.line == 3
    with pytest.raises(NonMonotonicTimestamp) as info:
        parse_csv(write("t,x,y\n0,0,0\n2,0,0\n1,0,0\n"))
    assert info.value.line == 4


@pytest.mark.parametrize("text,line", [("0,1,2\n1,abc,2\n", 2), ("0,1\n", 1), ("0,1,2\n,1,2\n", 2)])
def test_malformed_rows(write, text, line):
    with pytest.raises(MalformedRow) as info:
        parse_csv(write(text), HEADERLESS)
    assert info.value.line == line


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_csv(tmp_path / "absent.csv")


def test_empty_inputs(write):
    with pytest.raises(EmptySeries):
        parse_csv(write("t_ms,x_px,y_px\n"))
    with pytest.raises(EmptySeries):
        parse_csv(write("0,nan,1\n"), HEADERLESS)


def test_ten_column_export(write):
    # t, left x/y, right x/y, left/right pupil, three flags
    rows = ["10,500,300,505,302,3.1,3.0,0,0,0", "11,501,300,506,303,3.1,3.0,0,0,0"]
    cmap = ColumnMap(t_col=0, x_col=1, y_col=2, has_header=False)
    s = parse_csv(write("\n".join(rows) + "\n"), cmap)
    assert s.x.tolist() == [500, 501]
    right = parse_csv(write("\n".join(rows) + "\n", "r.csv"), ColumnMap(0, 3, 4, has_header=False))
    assert right.y.tolist() == [302, 303]


def test_column_map_validation():
    with pytest.raises(InputError):
        ColumnMap(0, 0, 2)
    with pytest.raises(InputError):
        ColumnMap(0, 1, 2, label_col=-1)
    assert ColumnMap(0, 1, 2, label_col=9).width == 10


# ground truth


def test_ground_truth_tokens(write):
    p = write("t,x,y,label\n0,1,1,F\n1,1,1,F\n2,5,5,S\n")
    assert parse_ground_truth(p, ColumnMap(label_col=3)).tokens() == ["F", "F", "S"]


def test_ground_truth_custom_vocabulary(write):
    p = write("0,fix,1,1\n1,sac,2,2\n")
    lab = parse_ground_truth(p, ColumnMap(0, 2, 3, label_col=1, has_header=False), vocabulary=("fix", "sac"))
    assert lab.tokens() == ["F", "S"]


def test_ground_truth_errors(write):
    with pytest.raises(UnknownLabelToken) as info:
        parse_ground_truth(write("t,x,y,label\n0,1,1,F\n1,1,1,X\n"), ColumnMap(label_col=3))
    assert info.value.line == 3 and info.value.token == "X"
    with pytest.raises(MissingLabelColumn):
        parse_ground_truth(write("0,1,1\n"), HEADERLESS)
    with pytest.raises(EmptySeries):
        parse_ground_truth(write("", "empty.csv"), ColumnMap(label_col=3))


def test_labeled_csv_stays_aligned_after_drops(write):
    p = write("t,x,y,label\n0,1,1,F\n1,nan,1,S\n2,3,3,S\n")
    series, lab = parse_labeled_csv(p, ColumnMap(label_col=3))
    assert series.t.tolist() == [0, 2]
    assert lab.tokens() == ["F", "S"]


def test_label_file_by_header(write):
    p = write(labels_to_csv(np.array([0.0, 1.0, 2.0]), LabelSeries.from_tokens("FSF")), "labels.csv")
    assert read_label_file(p).tokens() == ["F", "S", "F"]
    with pytest.raises(MissingLabelColumn):
        read_label_file(write("t,x\n0,1\n", "nolabel.csv"))


# writer


def test_fmt():
    assert fmt(3.0) == "3"
    assert fmt(-0.5) == "-0.5"
    assert fmt(0.1) == "0.1"
    assert float(fmt(1 / 3)) == 1 / 3


def test_canonical_header():
    s = GazeSeries([0, 1], [1.5, 2], [3, 4.25])
    assert series_to_csv(s) == "t_ms,x_px,y_px\n0,1.5,3\n1,2,4.25\n"
    assert series_to_csv(s, LabelSeries.from_tokens("FS")).splitlines()[0] == "t_ms,x_px,y_px,label"


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(gaze_series(max_size=40))
def test_write_then_parse_is_identity(tmp_path, series):
    p = tmp_path / "rt.csv"
    write_series_csv(p, series)
    back = parse_csv(p)
    assert np.array_equal(back.t, series.t)
    assert np.array_equal(back.x, series.x) and np.array_equal(back.y, series.y)
    assert series_to_csv(back) == p.read_text(encoding="utf-8")


def test_labeled_round_trip(tmp_path, short_synthetic):
    series, truth = short_synthetic
    p = tmp_path / "traj.csv"
    write_series_csv(p, series, truth)
    s2, t2 = parse_labeled_csv(p, ColumnMap(label_col=3))
    assert s2 == series and t2 == truth
    assert p.read_bytes().count(b"\r") == 0

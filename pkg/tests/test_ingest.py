import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from examstress.errors import (
    DuplicateRecord,
    EmptyRecording,
    IncompleteSession,
    InvalidGrade,
    InvalidRate,
    MissingGrade,
    ParseError,
)
from examstress.ingest import (
    ExamKind,
    GradeRecord,
    RawRecording,
    SignalKind,
    assemble_sessions,
    discover_manifest,
    parse_grade_roster,
    parse_sensor_csv,
    render_grade_roster,
    render_sensor_csv,
)
from examstress.synthetic import generate_synthetic_dataset


def test_parse_sensor_csv():
    rec = parse_sensor_csv("1568000000.0\n4.0\n33.81\n33.79", SignalKind.SkinTemperature)
    assert rec.start_epoch == 1568000000.0
    assert rec.sample_rate == 4.0
    assert rec.samples.tolist() == [33.81, 33.79]
    assert rec.kind is SignalKind.SkinTemperature


def test_parse_sensor_csv_crlf_and_trailing_blank_lines():
    rec = parse_sensor_csv("10.0\r\n1.0\r\n5\r\n6\r\n\r\n\n", SignalKind.HeartRate)
    assert rec.samples.tolist() == [5.0, 6.0]


def test_parse_sensor_csv_zero_rate():
    with pytest.raises(InvalidRate):
        parse_sensor_csv("1568000000.0\n0.0\n33.81", SignalKind.SkinTemperature)


def test_parse_sensor_csv_bad_line_reports_line_number():
    with pytest.raises(ParseError) as info:
        parse_sensor_csv("1568000000.0\n4.0\n33.81\nabc", SignalKind.SkinTemperature)
    assert info.value.line == 4


@pytest.mark.parametrize("text", ["", "1.0\n", "1.0\n4.0\n", "1.0\n4.0\n\n\n"])
def test_parse_sensor_csv_too_short(text):
    with pytest.raises(EmptyRecording):
        parse_sensor_csv(text, SignalKind.ElectrodermalActivity)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(
    start=st.floats(0, 2e9, allow_nan=False),
    rate=st.floats(0.01, 1000, allow_nan=False),
    samples=st.lists(finite, min_size=1, max_size=50),
    kind=st.sampled_from(list(SignalKind)),
)
def test_sensor_round_trip(start, rate, samples, kind):
    rec = RawRecording(kind, start, rate, np.array(samples))
    assert parse_sensor_csv(render_sensor_csv(rec), kind) == rec


def test_timestamps_strictly_increasing(cohort):
    for s in cohort:
        for rec in s.recordings.values():
            assert np.all(np.diff(rec.timestamps()) > 0)


def test_parse_grade_roster():
    [g] = parse_grade_roster("student_id,exam,raw_score,max_score\nS1,final,160,200")
    assert g == GradeRecord("S1", ExamKind.Final, 160.0, 200.0)
    assert g.percent == 80.0


def test_roster_exam_is_case_insensitive():
    rows = parse_grade_roster("student_id,exam,raw_score,max_score\nS1,MidTerm1,50,100\nS1,MIDTERM2,60,100\n")
    assert [g.exam for g in rows] == [ExamKind.Midterm1, ExamKind.Midterm2]


def test_roster_grade_above_max():
    with pytest.raises(InvalidGrade):
        parse_grade_roster("student_id,exam,raw_score,max_score\nS1,final,210,200")


def test_roster_duplicate():
    with pytest.raises(DuplicateRecord):
        parse_grade_roster("student_id,exam,raw_score,max_score\nS1,final,100,200\nS1,final,120,200")


@pytest.mark.parametrize(
    "text",
    [
        "student_id,exam,raw_score,max_score\nS1,quiz,1,2",
        "sid,exam,raw,max\nS1,final,1,2",
        "student_id,exam,raw_score,max_score\nS1,final,x,2",
    ],
)
def test_roster_parse_errors(text):
    with pytest.raises(ParseError):
        parse_grade_roster(text)


def test_roster_round_trip():
    records = [GradeRecord("S1", ExamKind.Midterm1, 71.5, 100.0), GradeRecord("S2", ExamKind.Final, 180.0, 200.0)]
    assert parse_grade_roster(render_grade_roster(records)) == records


def _write_cohort(tmp_path, n, exclude_extra=False):
    ds = generate_synthetic_dataset(3, n, 1.0)
    root = ds.write(tmp_path / "data")
    return root, parse_grade_roster(ds.roster)


def test_assemble_with_exclusion(tmp_path):
    root, roster = _write_cohort(tmp_path, 11)
    manifest = discover_manifest(root, exclusions=["S11"])
    sessions = assemble_sessions(manifest, roster)
    assert len(sessions) == 30
    assert "S11" not in {s.student_id for s in sessions}
    assert [s.key for s in sessions] == sorted(s.key for s in sessions)


def test_assemble_missing_exam(tmp_path):
    root, roster = _write_cohort(tmp_path, 3)
    for f in (root / "S02" / "Final").iterdir():
        f.unlink()
    (root / "S02" / "Final").rmdir()
    with pytest.raises(IncompleteSession):
        assemble_sessions(discover_manifest(root), roster)


def test_assemble_missing_signal_file(tmp_path):
    root, roster = _write_cohort(tmp_path, 3)
    (root / "S01" / "Midterm2" / "HR.csv").unlink()
    with pytest.raises(IncompleteSession, match="HR.csv"):
        assemble_sessions(discover_manifest(root), roster)


def test_assemble_missing_grade(tmp_path):
    root, roster = _write_cohort(tmp_path, 3)
    roster = [g for g in roster if not (g.student_id == "S03" and g.exam is ExamKind.Midterm1)]
    with pytest.raises(MissingGrade):
        assemble_sessions(discover_manifest(root), roster)


def test_assemble_everyone_excluded(tmp_path):
    root, roster = _write_cohort(tmp_path, 2)
    assert assemble_sessions(discover_manifest(root, ["S01", "S02"]), roster) == []


def test_assemble_independent_of_roster_order(tmp_path):
    root, roster = _write_cohort(tmp_path, 4)
    manifest = discover_manifest(root)
    a = assemble_sessions(manifest, roster)
    b = assemble_sessions(manifest, list(reversed(roster)))
    assert [(s.key, s.grade) for s in a] == [(s.key, s.grade) for s in b]

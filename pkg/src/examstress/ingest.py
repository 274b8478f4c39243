"""Reading wristband exports and grade rosters into validated sessions.

On-disk layout::

    root/<student_id>/<exam>/{TEMP.csv,HR.csv,EDA.csv}

where ``<exam>`` is one of ``Midterm1``, ``Midterm2``, ``Final``. Each sensor
file holds the start epoch on line 1, the sample rate (Hz) on line 2 and one
sample per line after that. Grades live in a separate roster CSV with header
``student_id,exam,raw_score,max_score``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateRecord,
    EmptyRecording,
    IncompleteSession,
    InvalidArgument,
    InvalidGrade,
    InvalidRate,
    MissingGrade,
    ParseError,
)


class SignalKind(enum.Enum):
    SkinTemperature = "TEMP"
    HeartRate = "HR"
    ElectrodermalActivity = "EDA"

    @property
    def filename(self) -> str:
        return f"{self.value}.csv"

    @property
    def short(self) -> str:
        return _SHORT_NAMES[self]

    @property
    def unit(self) -> str:
        return _UNITS[self]


_SHORT_NAMES = {
    SignalKind.SkinTemperature: "temp",
    SignalKind.HeartRate: "hr",
    SignalKind.ElectrodermalActivity: "eda",
}
_UNITS = {
    SignalKind.SkinTemperature: "degC",
    SignalKind.HeartRate: "bpm",
    SignalKind.ElectrodermalActivity: "uS",
}

#: Fixed signal order used by every feature vector.
SIGNAL_ORDER = (SignalKind.SkinTemperature, SignalKind.HeartRate, SignalKind.ElectrodermalActivity)


class ExamKind(enum.Enum):
    Midterm1 = "Midterm1"
    Midterm2 = "Midterm2"
    Final = "Final"

    @property
    def order(self) -> int:
        return _EXAM_ORDER[self]

    @classmethod
    def parse(cls, token: str) -> "ExamKind":
        """Case-insensitive lookup, e.g. ``"midterm1"`` or ``"FINAL"``."""
        lookup = {e.value.lower(): e for e in cls}
        try:
            return lookup[token.strip().lower()]
        except KeyError:
            raise ParseError(f"unknown exam {token!r}") from None


_EXAM_ORDER = {ExamKind.Midterm1: 0, ExamKind.Midterm2: 1, ExamKind.Final: 2}


@dataclass(frozen=True, eq=False)
class RawRecording:
    kind: SignalKind
    start_epoch: float
    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise InvalidRate(f"sample rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise EmptyRecording(f"{self.kind.name} recording has no samples")
        object.__setattr__(self, "samples", samples)

    def __eq__(self, other):
        if not isinstance(other, RawRecording):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.start_epoch == other.start_epoch
            and self.sample_rate == other.sample_rate
            and np.array_equal(self.samples, other.samples)
        )

    def __len__(self):
        return self.samples.size

    @property
    def end_epoch(self) -> float:
        return self.start_epoch + (self.samples.size - 1) / self.sample_rate

    def timestamps(self) -> np.ndarray:
        return self.start_epoch + np.arange(self.samples.size) / self.sample_rate


@dataclass(frozen=True)
class GradeRecord:
    student_id: str
    exam: ExamKind
    raw_score: float
    max_score: float

    def __post_init__(self):
        if not self.max_score > 0:
            raise InvalidGrade(f"{self.student_id}/{self.exam.value}: max_score must be positive")
        if self.raw_score < 0 or self.raw_score > self.max_score:
            raise InvalidGrade(
                f"{self.student_id}/{self.exam.value}: raw_score {self.raw_score} "
                f"outside [0, {self.max_score}]"
            )

    @property
    def percent(self) -> float:
        return 100.0 * self.raw_score / self.max_score


@dataclass(frozen=True)
class Session:
    student_id: str
    exam: ExamKind
    recordings: Mapping[SignalKind, RawRecording]
    grade: GradeRecord

    def __post_init__(self):
        missing = [k.name for k in SignalKind if k not in self.recordings]
        if missing:
            raise IncompleteSession(f"{self.student_id}/{self.exam.value}: missing {', '.join(missing)}")
        if self.grade.exam != self.exam or self.grade.student_id != self.student_id:
            raise InvalidArgument("grade record does not belong to this session")

    @property
    def key(self):
        return (self.student_id, self.exam.order)


@dataclass
class ManifestEntry:
    student_id: str
    exam: ExamKind
    files: dict[SignalKind, Path]


@dataclass
class DatasetManifest:
    root: Path
    entries: list[ManifestEntry]
    exclusions: list[str] = field(default_factory=list)

    def students(self) -> list[str]:
        excluded = set(self.exclusions)
        return sorted({e.student_id for e in self.entries} - excluded)

    def defects(self) -> list[str]:
        """Describe every missing exam folder or signal file among included students."""
        problems = []
        by_key = {(e.student_id, e.exam): e for e in self.entries}
        for sid in self.students():
            for exam in ExamKind:
                entry = by_key.get((sid, exam))
                if entry is None:
                    problems.append(f"{self.root / sid / exam.value}: missing exam directory")
                    continue
                for kind in SignalKind:
                    if kind not in entry.files:
                        problems.append(f"{self.root / sid / exam.value / kind.filename}: missing signal file")
        return problems


def parse_sensor_csv(text: str, kind: SignalKind) -> RawRecording:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 3:
        raise EmptyRecording(f"{kind.name}: expected start epoch, rate and at least one sample")
    values = []
    for lineno, line in enumerate(lines, start=1):
        try:
            value = float(line.strip())
        except ValueError:
            raise ParseError(f"not a number: {line!r}", line=lineno) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite value: {line!r}", line=lineno)
        values.append(value)
    start, rate = values[0], values[1]
    if rate <= 0:
        raise InvalidRate(f"{kind.name}: sample rate must be positive, got {rate}")
    return RawRecording(kind, start, rate, np.array(values[2:]))


def render_sensor_csv(recording: RawRecording) -> str:
    """Inverse of :func:`parse_sensor_csv`; floats are written with ``repr`` so they round-trip."""
    lines = [repr(float(recording.start_epoch)), repr(float(recording.sample_rate))]
    lines.extend(repr(float(v)) for v in recording.samples)
    return "\n".join(lines) + "\n"


ROSTER_HEADER = ["student_id", "exam", "raw_score", "max_score"]


def parse_grade_roster(text: str) -> list[GradeRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty roster", line=1) from None
    if header != ROSTER_HEADER:
        raise ParseError(f"expected header {','.join(ROSTER_HEADER)}, got {','.join(header)}", line=1)
    records = []
    seen = set()
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 columns, got {len(row)}", line=lineno)
        sid, exam_token, raw, mx = (cell.strip() for cell in row)
        try:
            exam = ExamKind.parse(exam_token)
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
        try:
            raw_score, max_score = float(raw), float(mx)
        except ValueError:
            raise ParseError(f"non-numeric score in {row!r}", line=lineno) from None
        if (sid, exam) in seen:
            raise DuplicateRecord(f"line {lineno}: duplicate grade for {sid}/{exam.value}")
        seen.add((sid, exam))
        records.append(GradeRecord(sid, exam, raw_score, max_score))
    return records


def render_grade_roster(records: Iterable[GradeRecord]) -> str:
    out = [",".join(ROSTER_HEADER)]
    for r in records:
        out.append(f"{r.student_id},{r.exam.value.lower()},{r.raw_score!r},{r.max_score!r}")
    return "\n".join(out) + "\n"


def discover_manifest(root, exclusions: Sequence[str] = ()) -> DatasetManifest:
    """Walk ``root`` for ``<student>/<exam>/<SIGNAL>.csv`` files.

    Directories that are not recognised exam names are ignored, as are stray
    files next to the student folders (the roster usually sits there).
    """
    root = Path(root)
    entries = []
    for student_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for exam_dir in sorted(p for p in student_dir.iterdir() if p.is_dir()):
            try:
                exam = ExamKind.parse(exam_dir.name)
            except ParseError:
                continue
            files = {k: exam_dir / k.filename for k in SignalKind if (exam_dir / k.filename).is_file()}
            entries.append(ManifestEntry(student_dir.name, exam, files))
    return DatasetManifest(root, entries, list(exclusions))


def assemble_sessions(manifest: DatasetManifest, roster: Sequence[GradeRecord]) -> list[Session]:
    """Read every included student's recordings and pair them with grades.

    Returns sessions sorted by ``(student_id, exam)``.
    """
    defects = manifest.defects()
    if defects:
        raise IncompleteSession("; ".join(defects))
    grades = {(g.student_id, g.exam): g for g in roster}
    by_key = {(e.student_id, e.exam): e for e in manifest.entries}
    sessions = []
    for sid in manifest.students():
        for exam in ExamKind:
            grade = grades.get((sid, exam))
            if grade is None:
                raise MissingGrade(f"no grade for {sid}/{exam.value}")
            entry = by_key[(sid, exam)]
            recordings = {
                kind: parse_sensor_csv(Path(path).read_text(encoding="utf-8"), kind)
                for kind, path in sorted(entry.files.items(), key=lambda kv: SIGNAL_ORDER.index(kv[0]))
            }
            sessions.append(Session(sid, exam, recordings, grade))
    return sort_sessions(sessions)


def sort_sessions(sessions: Iterable[Session]) -> list[Session]:
    return sorted(sessions, key=lambda s: s.key)


def load_dataset(root, roster_path, exclusions: Sequence[str] = ()) -> list[Session]:
    manifest = discover_manifest(root, exclusions)
    roster = parse_grade_roster(Path(roster_path).read_text(encoding="utf-8"))
    return assemble_sessions(manifest, roster)

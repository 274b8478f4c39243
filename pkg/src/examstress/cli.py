"""Command-line entry point.

    examstress validate|features|evaluate|synth [--config PATH] [--out DIR] [key=value ...]

Exit codes: 0 success, 1 data or validation failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, load_config, render_config
from .errors import ConfigError, ExamStressError
from .evaluation import evaluate_examples
from .features import build_examples
from .ingest import (
    ExamKind,
    assemble_sessions,
    discover_manifest,
    parse_grade_roster,
    parse_sensor_csv,
)
from .preprocess import preprocess_all
from .report import features_csv, results_csv, results_markdown, roc_csv, roc_svg
from .synthetic import generate_synthetic_dataset


def validate_dataset(cfg: RunConfig) -> tuple[list[str], int]:
    """Return ``(defects, n_sessions)``; the dataset is usable iff defects is empty."""
    if cfg.dataset_root is None:
        return ["dataset_root is not set"], 0
    root = Path(cfg.dataset_root)
    if not root.is_dir():
        return [f"{root}: dataset root is not a directory"], 0
    manifest = discover_manifest(root, cfg.exclusions)
    defects = manifest.defects()
    for entry in manifest.entries:
        if entry.student_id in cfg.exclusions:
            continue
        for kind, path in entry.files.items():
            try:
                parse_sensor_csv(path.read_text(encoding="utf-8"), kind)
            except (ExamStressError, OSError, UnicodeDecodeError) as exc:
                defects.append(f"{path}: {type(exc).__name__}: {exc}")
    roster_path = cfg.resolved_roster()
    try:
        roster = parse_grade_roster(roster_path.read_text(encoding="utf-8"))
    except OSError as exc:
        defects.append(f"{roster_path}: cannot read roster: {exc}")
        roster = None
    except ExamStressError as exc:
        defects.append(f"{roster_path}: {type(exc).__name__}: {exc}")
        roster = None
    students = manifest.students()
    if roster is not None:
        graded = {(g.student_id, g.exam) for g in roster}
        for sid in students:
            for exam in ExamKind:
                if (sid, exam) not in graded:
                    defects.append(f"{roster_path}: MissingGrade: no grade for {sid}/{exam.value}")
    return defects, len(students) * len(ExamKind)


def _load_sessions(cfg):
    defects, _ = validate_dataset(cfg)
    if defects:
        raise ExamStressError("dataset failed validation:\n  " + "\n  ".join(defects))
    manifest = discover_manifest(cfg.dataset_root, cfg.exclusions)
    roster = parse_grade_roster(cfg.resolved_roster().read_text(encoding="utf-8"))
    return assemble_sessions(manifest, roster)


def _write_all(out_dir: Path, files: dict[str, str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text, encoding="utf-8", newline="\n")


def cmd_validate(cfg: RunConfig) -> int:
    defects, n = validate_dataset(cfg)
    if defects:
        for d in defects:
            print(d)
        print(f"{len(defects)} defect(s) found")
        return 1
    print(f"{n} sessions OK")
    return 0


def cmd_features(cfg: RunConfig) -> int:
    sessions = _load_sessions(cfg)
    examples = build_examples(preprocess_all(sessions, cfg.preprocess), sessions, cfg.threshold)
    _write_all(Path(cfg.output_dir), {"features.csv": features_csv(examples)})
    print(f"wrote {len(examples)} rows to {Path(cfg.output_dir) / 'features.csv'}")
    return 0


def cmd_evaluate(cfg: RunConfig) -> int:
    sessions = _load_sessions(cfg)
    examples = build_examples(preprocess_all(sessions, cfg.preprocess), sessions, cfg.threshold)
    n_pos = sum(e.label for e in examples)
    if n_pos == 0 or n_pos == len(examples):
        raise ExamStressError(
            f"all {len(examples)} sessions fall on one side of the {cfg.threshold}% threshold; "
            "AUC is undefined without both classes"
        )
    summary = evaluate_examples(examples, cfg.specs(), cfg.repetitions, cfg.base_seed)
    files = {
        "results.md": results_markdown(summary, render_config(cfg)),
        "results.csv": results_csv(summary),
    }
    for name, res in summary.results.items():
        files[f"roc_{name}.csv"] = roc_csv(res.roc)
    files["roc.svg"] = roc_svg({n: r.roc for n, r in summary.results.items()}, {n: r.rep_aucs[0] for n, r in summary.results.items()})
    _write_all(Path(cfg.output_dir), files)
    print(results_markdown(summary))
    return 0


def cmd_synth(cfg: RunConfig, out_dir) -> int:
    out = Path(out_dir)
    if out.exists() and (not out.is_dir() or any(out.iterdir())):
        raise ExamStressError(f"{out} exists and is not empty; refusing to overwrite")
    dataset = generate_synthetic_dataset(cfg.synth_seed, cfg.synth_n_students, cfg.synth_correlation)
    dataset.write(out)
    print(f"wrote {cfg.synth_n_students} students x 3 exams to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="examstress", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=["validate", "features", "evaluate", "synth"])
    parser.add_argument("--config", type=Path, help="key = value config file")
    parser.add_argument("--out", type=Path, help="output directory (synth: dataset directory)")
    parser.add_argument("overrides", nargs="*", metavar="key=value", help="config overrides")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "synth":
            target = args.out or cfg.dataset_root
            if target is None:
                print("synth needs --out or dataset_root", file=sys.stderr)
                return 2
            return cmd_synth(cfg, target)
        if args.out is not None:
            cfg.output_dir = args.out
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "features":
            return cmd_features(cfg)
        return cmd_evaluate(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ExamStressError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

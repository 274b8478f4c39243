"""Run configuration: a flat ``key = value`` text file with dotted keys.

Example::

    dataset_root = data/uh_exam
    exclusions = S11
    preprocess.ma_window = 5
    preprocess.norm_scope = per_student_pooled
    classifiers.enabled = rf, sgd, svm, knn
    classifiers.rf.max_depths = 2, 4, 8, unlimited

Lines starting with ``#`` are comments. Unknown keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from .classifiers import ForestSpec, GammaFixed, GammaScale, KnnSpec, RfGrid, SgdSpec, SvmSpec
from .errors import ConfigError, ExamStressError
from .features import DEFAULT_THRESHOLD
from .preprocess import NormScope, PreprocessConfig

CLASSIFIER_ORDER = ("rf", "sgd", "svm", "knn")


@dataclass
class RunConfig:
    dataset_root: Optional[Path] = None
    roster_path: Optional[Path] = None
    exclusions: list[str] = field(default_factory=list)
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    threshold: float = DEFAULT_THRESHOLD
    enabled: tuple[str, ...] = CLASSIFIER_ORDER
    knn: KnnSpec = field(default_factory=KnnSpec)
    svm: SvmSpec = field(default_factory=SvmSpec)
    sgd: SgdSpec = field(default_factory=SgdSpec)
    rf: ForestSpec = field(default_factory=ForestSpec)
    repetitions: int = 10
    base_seed: int = 42
    output_dir: Path = Path("results")
    synth_seed: int = 7
    synth_n_students: int = 10
    synth_correlation: float = 1.0

    def resolved_roster(self) -> Path:
        if self.roster_path is not None:
            return self.roster_path
        if self.dataset_root is None:
            raise ConfigError("dataset_root is not set")
        return self.dataset_root / "roster.csv"

    def specs(self):
        by_name = {"rf": self.rf, "sgd": self.sgd, "svm": self.svm, "knn": self.knn}
        return [by_name[n] for n in CLASSIFIER_ORDER if n in self.enabled]


def _int(v):
    try:
        return int(v)
    except ValueError:
        raise ConfigError(f"expected an integer, got {v!r}") from None


def _float(v):
    try:
        return float(v)
    except ValueError:
        raise ConfigError(f"expected a number, got {v!r}") from None


def _list(v):
    return [item.strip() for item in v.split(",") if item.strip()]


def _depth(token):
    return None if token.lower() in ("unlimited", "none") else _int(token)


def _gamma(v):
    return GammaScale() if v.lower() == "scale" else GammaFixed(_float(v))


def _scope(v):
    try:
        return NormScope(v.lower())
    except ValueError:
        choices = ", ".join(s.value for s in NormScope)
        raise ConfigError(f"preprocess.norm_scope must be one of {choices}") from None


def _enabled(v):
    names = tuple(n.lower() for n in _list(v))
    unknown = sorted(set(names) - set(CLASSIFIER_ORDER))
    if unknown or not names:
        raise ConfigError(f"classifiers.enabled must be a non-empty subset of {', '.join(CLASSIFIER_ORDER)}")
    return names


def _setter(path: tuple[str, ...], parse: Callable):
    def apply(cfg: RunConfig, value: str, base: Path):
        v = parse(value)
        if path[0] in ("dataset_root", "roster_path", "output_dir"):
            v = (base / Path(value)).resolve() if not Path(value).is_absolute() else Path(value)
        if len(path) == 1:
            setattr(cfg, path[0], v)
        else:
            sub = getattr(cfg, path[0])
            if len(path) == 3:
                grid = replace(sub.grid, **{path[2]: v})
                setattr(cfg, path[0], replace(sub, grid=grid))
            else:
                setattr(cfg, path[0], replace(sub, **{path[1]: v}))

    return apply


KEYS = {
    "dataset_root": _setter(("dataset_root",), str),
    "roster_path": _setter(("roster_path",), str),
    "output_dir": _setter(("output_dir",), str),
    "exclusions": _setter(("exclusions",), _list),
    "threshold": _setter(("threshold",), _float),
    "repetitions": _setter(("repetitions",), _int),
    "base_seed": _setter(("base_seed",), _int),
    "preprocess.ma_window": _setter(("preprocess", "ma_window"), _int),
    "preprocess.norm_scope": _setter(("preprocess", "norm_scope"), _scope),
    "classifiers.enabled": _setter(("enabled",), _enabled),
    "classifiers.knn.k": _setter(("knn", "k"), _int),
    "classifiers.svm.c": _setter(("svm", "c"), _float),
    "classifiers.svm.gamma": _setter(("svm", "gamma"), _gamma),
    "classifiers.svm.tol": _setter(("svm", "tol"), _float),
    "classifiers.svm.max_passes": _setter(("svm", "max_passes"), _int),
    "classifiers.sgd.learning_rate": _setter(("sgd", "learning_rate"), _float),
    "classifiers.sgd.epochs": _setter(("sgd", "epochs"), _int),
    "classifiers.sgd.l2": _setter(("sgd", "l2"), _float),
    "classifiers.rf.inner_folds": _setter(("rf", "inner_folds"), _int),
    "classifiers.rf.tree_counts": _setter(("rf", "grid", "tree_counts"), lambda v: tuple(_int(t) for t in _list(v))),
    "classifiers.rf.max_depths": _setter(("rf", "grid", "max_depths"), lambda v: tuple(_depth(t) for t in _list(v))),
    "synth.seed": _setter(("synth_seed",), _int),
    "synth.n_students": _setter(("synth_n_students",), _int),
    "synth.correlation": _setter(("synth_correlation",), _float),
}


def apply_setting(cfg: RunConfig, key: str, value: str, base: Path = Path(".")) -> None:
    key = key.strip()
    if key not in KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        KEYS[key](cfg, value.strip(), base)
    except ConfigError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    except (ExamStressError, ValueError) as exc:
        raise ConfigError(f"{key}: {exc}") from None


def parse_config_text(text: str, base: Path = Path("."), cfg: Optional[RunConfig] = None) -> RunConfig:
    cfg = cfg or RunConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        try:
            apply_setting(cfg, key, value, base)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    if cfg.repetitions < 1:
        raise ConfigError("repetitions must be at least 1")
    return cfg


def load_config(path=None, overrides=()) -> RunConfig:
    """Read the config file (if any) and then apply ``key=value`` overrides."""
    cfg = RunConfig()
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        cfg = parse_config_text(text, path.parent.resolve(), cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        apply_setting(cfg, key, value, Path.cwd())
    if cfg.repetitions < 1:
        raise ConfigError("repetitions must be at least 1")
    return cfg


def render_config(cfg: RunConfig) -> str:
    """Key/value dump of the settings that affect results, for provenance."""
    def depth(d):
        return "unlimited" if d is None else str(d)

    gamma = "scale" if isinstance(cfg.svm.gamma, GammaScale) else repr(cfg.svm.gamma.value)
    lines = [
        f"exclusions = {', '.join(cfg.exclusions)}",
        f"threshold = {cfg.threshold!r}",
        f"repetitions = {cfg.repetitions}",
        f"base_seed = {cfg.base_seed}",
        f"preprocess.ma_window = {cfg.preprocess.ma_window}",
        f"preprocess.norm_scope = {cfg.preprocess.norm_scope.value}",
        f"classifiers.enabled = {', '.join(cfg.enabled)}",
        f"classifiers.knn.k = {cfg.knn.k}",
        f"classifiers.svm.c = {cfg.svm.c!r}",
        f"classifiers.svm.gamma = {gamma}",
        f"classifiers.sgd.learning_rate = {cfg.sgd.learning_rate!r}",
        f"classifiers.sgd.epochs = {cfg.sgd.epochs}",
        f"classifiers.sgd.l2 = {cfg.sgd.l2!r}",
        f"classifiers.rf.tree_counts = {', '.join(str(n) for n in cfg.rf.grid.tree_counts)}",
        f"classifiers.rf.max_depths = {', '.join(depth(d) for d in cfg.rf.grid.max_depths)}",
        f"classifiers.rf.inner_folds = {cfg.rf.inner_folds}",
    ]
    return "\n".join(lines) + "\n"

"""
Driving the pipeline from the command line
==========================================

The ``examstress`` command wraps the same steps. This script calls its
entry point in-process so it runs anywhere the package is installed.
"""

import tempfile
from pathlib import Path

from examstress.cli import main

work = Path(tempfile.mkdtemp())
data, out = work / "data", work / "results"

main(["synth", "--out", str(data), "synth.seed=7", "synth.n_students=10"])
main(["validate", f"dataset_root={data}"])
main(["features", f"dataset_root={data}", "--out", str(out)])

# a reduced forest grid keeps this demonstration quick
main([
    "evaluate", f"dataset_root={data}", "--out", str(out),
    "repetitions=2", "classifiers.rf.tree_counts=20", "classifiers.rf.max_depths=2,unlimited",
])
print(sorted(p.name for p in out.iterdir()))
print((out / "roc.svg").read_text()[:200])

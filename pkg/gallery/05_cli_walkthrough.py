"""
The command line
================

Everything above is also reachable from ``motif-forge``: synthesize a series,
discover motif sets from a JSON configuration, then score them.
"""
import json
import tempfile
from pathlib import Path

from motif_forge.cli import main

work = Path(tempfile.mkdtemp())
(work / "synth.json").write_text(json.dumps({
    "n": 1000, "seed": 2, "noise_sigma": 0.1, "min_gap": 10,
    "patterns": [{"template_length": 50, "occurrences": 4, "amplitude": 2.0},
                 {"template_length": 90, "occurrences": 3, "amplitude": 2.0}]}))
(work / "config.json").write_text(json.dumps({
    "kappa": 2, "rho": 0.9, "nu": 0.25, "l_min": 30, "l_max": 130, "warping": True,
    "constraints": [{"kind": "min_cardinality", "mode": "soft", "applies_to": "all", "params": {"k_min": 3}}]}))

main(["synth", "-s", str(work / "synth.json"), "-o", str(work / "x.csv"), "-g", str(work / "gt.json")])
code = main(["discover", "-i", str(work / "x.csv"), "-c", str(work / "config.json"),
             "-o", str(work / "result.json"), "--spans", str(work / "spans.tsv")])
print("discover exit code", code)
print((work / "spans.tsv").read_text())
main(["eval", "-r", str(work / "result.json"), "-g", str(work / "gt.json")])

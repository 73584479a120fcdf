"""
Driving the suite from a config file
====================================

The ``epsverify check`` command takes a JSON config.  Here we write one for
an inline model, run the command in-process, and read the JSON report back.
"""

import json
import tempfile
from pathlib import Path

from epsverify.cli import main

config = {
    "model": {
        "name": "inline-warped",
        "coordinates": ["u", "v", "w"],
        "metric": [["exp(2*eps*w)", "0", "0"], ["0", "exp(2*eps*w)", "0"], ["0", "0", "eps"]],
        "phi": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
        "xi": ["0", "0", "1"],
        "eta": ["0", "0", "1"],
        "psi": "0.5",
        "epsilon": -1,
    },
    "sampling": {"count": 20, "seed": 7},
    "checks": ["einstein", "z-semisymmetric", "z-pseudosymmetric"],
}

with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp) / "config.json"
    out = Path(tmp) / "report.json"
    cfg.write_text(json.dumps(config))
    code = main(["check", str(cfg), "--report", "json", "--out", str(out)])
    report = json.loads(out.read_text())

print("exit code:", code)
print("aggregate:", json.dumps(report["aggregate"], indent=2))
print("theorems:", report["theorems"])

# A malformed expression is a configuration error with a JSON path and an
# offset into the expression, and exit code 2.
config["model"]["metric"][1][1] = "exp(2*eps*w"
print("exit code for a broken config:", main(["check", json.dumps(config)]))

"""
Negative controls
=================

A verifier that only ever says "pass" proves nothing.  The flat metric and a
perturbed warped metric keep the same ``phi``, ``xi`` and ``eta`` but are not
para-Sasakian, and the suite must notice.
"""

from epsverify.config import load_config
from epsverify.suite import run_suite

for name in ("warped", "warped-curved", "flat-control", "perturbed-control"):
    report = run_suite(load_config({"model": name, "epsilon": 1, "sampling": {"count": 25}}))
    para = report.aggregate_residuals["para-sasakian"]["max_residual"]
    print(f"{name:18s} para-Sasakian {report.aggregate['para-sasakian']:4s} "
          f"(max residual {para:.2e})  einstein {report.aggregate['einstein']:4s} "
          f"exit code {report.exit_code}")

# The controls pass the purely algebraic axioms, fail the covariant-derivative
# conditions, and every curvature predicate is reported as not applicable.
# "warped-curved" is para-Sasakian but not Einstein: the conditions fail
# together while every statement about them still holds.

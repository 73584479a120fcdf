"""Suite orchestration: per-point checks, aggregation, theorem summary, reports."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import sys
import time

from . import __version__
from . import zsymmetry as zs
from .config import sample_points
from .errors import ConfigError, EvaluationError
from .geometry import Tolerances, constant_curvature_deviation, metric_compatibility
from .paracontact import (
    check_curvature_identities,
    check_para_sasakian,
    check_structure_axioms,
    to_frame,
    CheckReport,
)

PREREQUISITES = ("evaluation", "structure", "para-sasakian", "identities")

#: Theorem id -> conditions it needs, in the order they are reported.
THEOREMS = {
    "thm_3_1": ("einstein", "z-semisymmetric"),
    "thm_3_2": ("z-semisymmetric", "ricci-symmetric"),
    "thm_3_3": ("z-semisymmetric", "ricci-semisymmetric"),
    "thm_3_4": ("z-pseudosymmetric", "einstein"),
    "thm_3_5": ("projectively-z-semisymmetric", "einstein"),
    "cor_3_1": ("equivalence",),
    "cor_3_2": ("z-symmetric", "ricci-symmetric"),
    "cor_3_3": ("z-pseudosymmetric", "einstein"),
    "cor_3_4": ("z-pseudosymmetric",),
}


@dataclass
class PointResult:
    index: int
    coords: tuple
    residuals: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    error: str = None
    signature_index: int = None
    conditions: dict = field(default=None, repr=False)
    theorems: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "coords": list(self.coords),
            "residuals": self.residuals,
            "verdicts": self.verdicts,
            "theorems": self.theorems,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _agree(a, b):
    if "na" in (a, b):
        return "na"
    return "pass" if a == b else "fail"


def _implies(a, b):
    if "na" in (a, b):
        return "na"
    return "fail" if a == "pass" and b != "pass" else "pass"


def theorem_statuses(verdicts, tol):
    """Per-point status of each theorem from the condition verdicts."""
    v = {k: c.status for k, c in verdicts.items()}
    zps = verdicts["z-pseudosymmetric"]
    if zps.status == "na":
        dichotomy = "na"
    else:
        pseudo = zps.aux.get("pseudosymmetric", False)
        l_is_minus_eps = zps.aux.get("branch") == "fit" and zps.passed
        dichotomy = "pass" if (not pseudo or v["einstein"] == "pass" or l_is_minus_eps) else "fail"
    cor34 = verdicts["_cor_3_4"]
    # the projective statement reduces to (psi - 2 eps)[S + 2 eps g] = 0,
    # which says nothing when the factor vanishes
    proj = verdicts["projectively-z-semisymmetric"]
    thm35 = _implies(proj.status, v["einstein"])
    if proj.status != "na" and proj.aux["factor"] < proj.tolerance:
        thm35 = "na"
    return {
        "thm_3_1": _agree(v["einstein"], v["z-semisymmetric"]),
        "thm_3_2": _agree(v["z-semisymmetric"], v["ricci-symmetric"]),
        "thm_3_3": _agree(v["z-semisymmetric"], v["ricci-semisymmetric"]),
        "thm_3_4": dichotomy,
        "thm_3_5": thm35,
        "cor_3_1": v["equivalence"],
        "cor_3_2": _implies(v["z-symmetric"], v["ricci-symmetric"]),
        "cor_3_3": dichotomy,
        "cor_3_4": cor34.status,
    }


def context_verdicts(ctx, tolerances=Tolerances(), applicable=True):
    """Condition verdicts plus the Cor 3.4 identity for a frame context."""
    verdicts = zs.evaluate_conditions(ctx, tolerances, applicable)
    if applicable:
        cor = zs.ConditionVerdict.from_residual(
            "cor_3_4", zs.pseudosymmetry_identity_residual(ctx), tolerances.predicate
        )
    else:
        cor = zs.ConditionVerdict.not_applicable("cor_3_4", tolerances.predicate)
    verdicts["_cor_3_4"] = cor
    return verdicts


def evaluate_point(model, point, index, tolerances=Tolerances()):
    """All checks at one sample point; evaluation errors are recorded, not raised."""
    res = PointResult(index=index, coords=tuple(float(p) for p in point))
    try:
        geom, sev, ctx = model.evaluate(point)
    except EvaluationError as exc:
        res.error = str(exc)
        res.verdicts["evaluation"] = "fail"
        for name in PREREQUISITES[1:]:
            res.verdicts[name] = "na"
        res.conditions = context_verdicts(None, tolerances, applicable=False)
        return res
    res.verdicts["evaluation"] = "pass"
    res.signature_index = geom.index

    structure = check_structure_axioms(sev, geom.g, tolerances.axiom)
    para = check_para_sasakian(sev, geom, tolerances.axiom)
    sound = structure.passed and para.passed
    frame = to_frame(ctx)
    ident = check_curvature_identities(ctx, tolerances.identity, applicable=sound)
    ident.residuals.update(zs.z_identity_residuals(ctx))
    ident.residuals["eq_3_18"] = zs.wedge_identity_residual(ctx)
    ident.residuals["eq_3_21a"] = zs.projective_identity_residual(ctx)

    compat = CheckReport("metric-compatibility", {"nabla_g": metric_compatibility(geom)}, tolerances.axiom)
    for rep in (structure, para, ident):
        for key, val in rep.residuals.items():
            res.residuals[f"{rep.name}.{key}"] = val
        res.verdicts[rep.name] = rep.status
    res.residuals["structure.nabla_g"] = compat.max_residual
    if not compat.passed:
        res.verdicts["structure"] = "fail"
    res.residuals["geometry.scalar"] = geom.scalar
    res.residuals["geometry.constant_curvature_deviation"] = constant_curvature_deviation(geom)
    res.conditions = context_verdicts(frame, tolerances, applicable=sound)
    return res


@dataclass
class RunReport:
    config: dict
    points: list
    aggregate: dict
    aggregate_residuals: dict
    theorems: dict
    theorem_witnesses: dict
    version: str = __version__
    wall_time: float = 0.0

    @property
    def exit_code(self):
        return 1 if "fail" in self.aggregate.values() else 0

    def to_dict(self, include_wall_time=True):
        out = {
            "config": self.config,
            "points": [p.to_dict() for p in self.points],
            "aggregate": self.aggregate,
            "aggregate_residuals": self.aggregate_residuals,
            "theorems": self.theorems,
            "theorem_witnesses": self.theorem_witnesses,
            "version": self.version,
        }
        if include_wall_time:
            out["wall_time"] = self.wall_time
        return out


def _max_or_none(values):
    values = [v for v in values if v is not None]
    return max(values) if values else None


def run_suite(config, workers=1):
    """Evaluate every sample point and assemble the report."""
    start = time.perf_counter()
    points = sample_points(config)
    tol = config.tolerances
    model = config.model

    def job(k):
        return evaluate_point(model, points[k], k, tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(len(points))))
    else:
        results = [job(k) for k in range(len(points))]

    selected = tuple(config.checks)
    theorem_ids = [t for t, needs in THEOREMS.items() if all(n in selected for n in needs)]
    for r in results:
        conds = r.conditions
        for name in selected:
            r.verdicts[name] = conds[name].status
            r.residuals[name] = conds[name].residual
            for k, val in conds[name].aux.items():
                if isinstance(val, (int, float)) and not isinstance(val, bool):
                    r.residuals[f"{name}.{k}"] = val
        ths = theorem_statuses(conds, tol)
        r.theorems = {t: ths[t] for t in theorem_ids}
        if "cor_3_4" in theorem_ids:
            r.residuals["cor_3_4"] = conds["_cor_3_4"].residual

    names = list(PREREQUISITES) + ["signature"] + list(selected)
    aggregate = {}
    aggregate_residuals = {}
    for name in names:
        if name == "signature":
            idx = {r.signature_index for r in results if r.signature_index is not None}
            aggregate[name] = "na" if not idx else ("pass" if len(idx) == 1 else "fail")
            aggregate_residuals[name] = {"indices": sorted(idx)}
            continue
        aggregate[name] = zs.aggregate_status(r.verdicts[name] for r in results)
        if name in selected:
            aggregate_residuals[name] = {
                "max_residual": _max_or_none(r.conditions[name].residual for r in results),
                "tolerance": results[0].conditions[name].tolerance,
            }
        elif name != "evaluation":
            aggregate_residuals[name] = {
                "max_residual": _max_or_none(
                    v for r in results for k, v in r.residuals.items() if k.startswith(name + ".")
                ),
                "tolerance": tol.identity if name == "identities" else tol.axiom,
            }
    theorems = {t: zs.aggregate_status(r.theorems[t] for r in results) for t in theorem_ids}
    witnesses = {}
    for t in theorem_ids:
        witnesses[t] = {
            c: _max_or_none(r.conditions[c].residual for r in results) for c in THEOREMS[t]
        }
        if t == "cor_3_4":
            witnesses[t] = {"max_abs_RZ_plus_eps_QgZ": _max_or_none(r.conditions["_cor_3_4"].residual for r in results)}
    return RunReport(
        config=config.echo(),
        points=results,
        aggregate=aggregate,
        aggregate_residuals=aggregate_residuals,
        theorems=theorems,
        theorem_witnesses=witnesses,
        wall_time=time.perf_counter() - start,
    )


def summarize_contexts(contexts, tolerances=Tolerances()):
    """Aggregate verdicts and theorem statuses over pointwise contexts.

    Contexts are taken as given (no chart, no structure gating), which is how
    synthetic contexts are certified.  Returns ``(aggregate, theorems, per_point)``.
    """
    per_point = [context_verdicts(ctx, tolerances) for ctx in contexts]
    aggregate = {
        name: zs.aggregate_status(v[name].status for v in per_point) for name in zs.CONDITIONS
    }
    ths = [theorem_statuses(v, tolerances) for v in per_point]
    theorems = {t: zs.aggregate_status(th[t] for th in ths) for t in THEOREMS}
    return aggregate, theorems, per_point


def to_json(report, include_wall_time=True):
    return json.dumps(report.to_dict(include_wall_time), indent=2, allow_nan=False) + "\n"


def to_text(report):
    lines = [f"epsverify {report.version}  model={report.config['model']!r}  "
             f"epsilon={report.config['epsilon']:+d}  points={len(report.points)}", ""]
    lines.append(f"{'check':<32}{'verdict':<9}{'max residual':>16}{'tolerance':>12}")
    lines.append("-" * 69)
    for name, status in report.aggregate.items():
        info = report.aggregate_residuals.get(name, {})
        mr = info.get("max_residual")
        tol = info.get("tolerance")
        mr_s = "-" if mr is None else f"{mr:.3e}"
        tol_s = "-" if tol is None else f"{tol:.1e}"
        if name == "signature":
            mr_s = "index " + ",".join(str(i) for i in info.get("indices", []))
        lines.append(f"{name:<32}{status:<9}{mr_s:>16}{tol_s:>12}")
    if report.theorems:
        lines += ["", f"{'statement':<32}{'verdict':<9}"]
        lines.append("-" * 41)
        for t, status in report.theorems.items():
            lines.append(f"{t:<32}{status:<9}")
    errors = [p for p in report.points if p.error]
    if errors:
        lines += ["", f"{len(errors)} point(s) failed to evaluate; first: {errors[0].error}"]
    return "\n".join(lines) + "\n"


def emit_report(report, format="text", out=None):
    """Write the report as text or JSON to ``out`` (a path) or standard output."""
    if format not in ("text", "json"):
        raise ConfigError(f"unknown report format {format!r}", "--report")
    payload = to_json(report) if format == "json" else to_text(report)
    if out is None or out == "-":
        sys.stdout.write(payload)
        return
    try:
        with open(out, "w") as fh:
            fh.write(payload)
    except OSError as exc:
        raise ConfigError(f"cannot write report: {exc.strerror}", str(out)) from None

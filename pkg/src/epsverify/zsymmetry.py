"""The Z tensor, curvature derivations and the symmetry condition predicates.

Sign convention: both the curvature derivation and the Tachibana-type
operator carry a minus sign on every slot,

    (R.T)(X1..Xk; X, Y)  = -sum_a T(X1, .., R(X, Y) Xa, .., Xk)
    Q(A,T)(X1..Xk; X, Y) = -sum_a T(X1, .., (X ^_A Y) Xa, .., Xk)

so vanishing conditions and fitted proportionality factors are unaffected.
Full operator arrays keep the tensor slots first and the trailing pair
``(X, Y)`` last.

Predicates take a :class:`~epsverify.paracontact.PointContext`; callers should
pass it in an orthonormal frame (see :func:`~epsverify.paracontact.to_frame`)
so that absolute tolerances are meaningful.
"""

from dataclasses import dataclass, field
import string

import numpy as np

from .geometry import Tolerances

CONDITIONS = (
    "einstein",
    "ricci-symmetric",
    "ricci-semisymmetric",
    "z-symmetric",
    "z-semisymmetric",
    "z-pseudosymmetric",
    "projectively-z-semisymmetric",
    "equivalence",
)
EQUIVALENT_CONDITIONS = ("einstein", "ricci-symmetric", "ricci-semisymmetric", "z-semisymmetric")

#: Norm below which Z (resp. Q(g, Z)) counts as vanishing.
DOMAIN_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class ZData:
    z: np.ndarray
    z_scalar: float
    psi: float
    dz: np.ndarray = None


def z_tensor(S, g, psi, nabla_z=None):
    """Z = S + psi g and its trace."""
    z = np.asarray(S) + psi * np.asarray(g)
    return ZData(z=z, z_scalar=float(np.einsum("ij,ij->", np.linalg.inv(g), z)), psi=psi, dz=nabla_z)


def projective_tensor(riemann, ricci):
    """P(X, Y)U = R(X, Y)U - 1/2 [S(Y, U) X - S(X, U) Y] as a (1,3) array."""
    d = np.eye(riemann.shape[0])
    return riemann - 0.5 * (np.einsum("jk,li->lijk", ricci, d) - np.einsum("ik,lj->lijk", ricci, d))


def first_slot(endo, v):
    """Contract the first vector slot: ``E(v, e_j) e_k`` as array [l, j, k]."""
    return np.einsum("lijk,i->ljk", endo, v)


def wedge(A, X, Y, Z):
    """(X ^_A Y) Z = A(Y, Z) X - A(X, Z) Y."""
    return (Y @ A @ Z) * X - (X @ A @ Z) * Y


def wedge_tensor(A):
    """The endomorphism field X ^_A Y as a (1,3) array [l, i, j, k]."""
    d = np.eye(A.shape[0])
    return np.einsum("li,jk->lijk", d, A) - np.einsum("lj,ik->lijk", d, A)


def derivation_tensor(T, endo):
    """-sum over slots of T with ``endo(X, Y)`` applied; trailing axes (X, Y)."""
    T = np.asarray(T)
    k = T.ndim
    letters = string.ascii_lowercase[:k]
    out = 0.0
    for slot in range(k):
        t_idx = letters[:slot] + "z" + letters[slot + 1 :]
        out = out - np.einsum(f"{t_idx},zxy{letters[slot]}->{letters}xy", T, endo)
    return out


def curvature_derivation(T, riemann, X, Y):
    """(R.T)(.; X, Y) as a (0,k) array."""
    if np.ndim(T) not in (2, 3, 4):
        raise ValueError("curvature derivation supports (0,k) tensors with k in 2..4")
    return np.einsum("...xy,x,y->...", derivation_tensor(T, riemann), X, Y)


def q_operator(A, T, X, Y):
    """Q(A, T)(.; X, Y) as a (0,k) array."""
    if np.ndim(T) not in (2, 3, 4):
        raise ValueError("Q operator supports (0,k) tensors with k in 2..4")
    return np.einsum("...xy,x,y->...", derivation_tensor(T, wedge_tensor(A)), X, Y)


def estimate_pseudosymmetry_function(rt, q, tol=DOMAIN_THRESHOLD):
    """Least-squares L with R.T ~ L Q(g, T).

    Returns ``(L, relative_residual)`` or ``None`` when ``Q`` vanishes.
    """
    rt = np.ravel(rt)
    q = np.ravel(q)
    qq = float(q @ q)
    if np.sqrt(qq) < tol:
        return None
    L = float(rt @ q) / qq
    norm = float(np.linalg.norm(rt))
    residual = 0.0 if norm == 0.0 else float(np.linalg.norm(rt - L * q)) / norm
    return L, residual


@dataclass
class ConditionVerdict:
    name: str
    residual: float
    tolerance: float
    status: str  # "pass" | "fail" | "na"
    aux: dict = field(default_factory=dict)

    @classmethod
    def from_residual(cls, name, residual, tolerance, **aux):
        return cls(name, float(residual), tolerance, "pass" if residual < tolerance else "fail", aux)

    @classmethod
    def not_applicable(cls, name, tolerance, **aux):
        return cls(name, None, tolerance, "na", aux)

    @property
    def passed(self):
        return self.status == "pass"


def _maxabs(a):
    return float(np.max(np.abs(a)))


def _z(ctx):
    return ctx.ricci + ctx.psi * ctx.g


def z_identity_residuals(ctx):
    """Trace of Z against r + 3 psi, and Z(., xi) against (eps psi - 2) eta."""
    zd = z_tensor(ctx.ricci, ctx.g, ctx.psi)
    return {
        "z_scalar": abs(zd.z_scalar - (ctx.scalar + 3 * ctx.psi)),
        "eq_2_15": _maxabs(zd.z @ ctx.xi - (ctx.epsilon * ctx.psi - 2) * ctx.eta),
    }


def projective_identity_residual(ctx):
    """P(xi, X)Y + 1/2 S(X, Y) xi + eps g(X, Y) xi."""
    pxi = first_slot(projective_tensor(ctx.riemann, ctx.ricci), ctx.xi)
    rhs = -0.5 * np.einsum("jk,l->ljk", ctx.ricci, ctx.xi) - ctx.epsilon * np.einsum(
        "jk,l->ljk", ctx.g, ctx.xi
    )
    return _maxabs(pxi - rhs)


def wedge_identity_residual(ctx):
    """R(xi, X)Y + eps (xi ^_g X)Y."""
    rxi = first_slot(ctx.riemann, ctx.xi)
    wxi = first_slot(wedge_tensor(ctx.g), ctx.xi)
    return _maxabs(rxi + ctx.epsilon * wxi)


def pseudosymmetry_identity_residual(ctx):
    """max |R.Z + eps Q(g, Z)| over all slots."""
    z = _z(ctx)
    return _maxabs(derivation_tensor(z, ctx.riemann) + ctx.epsilon * derivation_tensor(z, wedge_tensor(ctx.g)))


def check_einstein(S, g, epsilon, tol=Tolerances().predicate):
    lam = float(np.einsum("ij,ij->", np.linalg.inv(g), S)) / g.shape[0]
    return ConditionVerdict.from_residual(
        "einstein",
        _maxabs(S + 2 * epsilon * g),
        tol,
        fitted_lambda=lam,
        proportionality_residual=_maxabs(S - lam * g),
    )


def check_ricci_semisymmetric(ctx, tol=Tolerances().predicate):
    return ConditionVerdict.from_residual(
        "ricci-semisymmetric", _maxabs(derivation_tensor(ctx.ricci, ctx.riemann)), tol
    )


def check_z_semisymmetric(ctx, tol=Tolerances().predicate):
    z = _z(ctx)
    eps = ctx.epsilon
    return ConditionVerdict.from_residual(
        "z-semisymmetric",
        _maxabs(derivation_tensor(z, ctx.riemann)),
        tol,
        eq_3_6_residual=_maxabs(z - (ctx.psi - 2 * eps) * ctx.g),
        scalar_factor=abs(ctx.scalar / 2 + 3 * eps),
    )


def check_ricci_symmetric(ctx, tol=Tolerances().derivative):
    if ctx.nabla_ricci is None:
        return ConditionVerdict.not_applicable("ricci-symmetric", tol, reason="no chart derivatives")
    nS = ctx.nabla_ricci
    # (nabla_X S)(Y, xi) + eps S(phi X, Y) + 2 g(phi X, Y), laid out [X, Y]
    aux = (
        np.einsum("ayk,k->ay", nS, ctx.xi)
        + ctx.epsilon * np.einsum("ly,la->ay", ctx.ricci, ctx.phi)
        + 2 * np.einsum("ly,la->ay", ctx.g, ctx.phi)
    )
    return ConditionVerdict.from_residual(
        "ricci-symmetric", _maxabs(nS), tol, xi_identity_residual=_maxabs(aux)
    )


def check_z_symmetric(ctx, tol=Tolerances().derivative):
    if ctx.nabla_z is None:
        return ConditionVerdict.not_applicable("z-symmetric", tol, reason="no chart derivatives")
    return ConditionVerdict.from_residual("z-symmetric", _maxabs(ctx.nabla_z), tol)


def check_z_pseudosymmetric(ctx, tol=Tolerances().predicate, einstein=None):
    """Dichotomy verdict: degenerate (Q(g,Z) = 0 and R.Z = 0) or L_Z = -eps."""
    z = _z(ctx)
    if np.linalg.norm(z) <= DOMAIN_THRESHOLD:
        return ConditionVerdict.not_applicable("z-pseudosymmetric", tol, reason="Z vanishes")
    if einstein is None:
        einstein = check_einstein(ctx.ricci, ctx.g, ctx.epsilon, tol)
    rz = derivation_tensor(z, ctx.riemann)
    q = derivation_tensor(z, wedge_tensor(ctx.g))
    fit = estimate_pseudosymmetry_function(rz, q)
    aux = {"einstein": einstein.status}
    if fit is None:
        residual = _maxabs(rz)
        aux.update(branch="degenerate", pseudosymmetric=residual < tol)
        return ConditionVerdict.from_residual("z-pseudosymmetric", residual, tol, **aux)
    L, fit_residual = fit
    aux.update(
        branch="fit",
        L=L,
        fit_residual=fit_residual,
        pseudosymmetric=fit_residual < tol,
    )
    return ConditionVerdict.from_residual(
        "z-pseudosymmetric", max(fit_residual, abs(L + ctx.epsilon)), tol, **aux
    )


def factorization_residual(ctx):
    """xi-reduced P.Z versus (psi - 2 eps)[S + 2 eps g].

    The reduced quantity Z(P(xi, Y)U, xi) + Z(U, P(xi, Y)xi) equals
    -(eps/2)(psi - 2 eps)[S(U, Y) + 2 eps g(U, Y)] on para-Sasakian
    contexts, so it is rescaled by -2 eps before comparison.
    Returns (rescaled reduction as [U, Y] array, residual).
    """
    eps = ctx.epsilon
    z = _z(ctx)
    pxi = first_slot(projective_tensor(ctx.riemann, ctx.ricci), ctx.xi)  # [l, y, u]
    z_xi = z @ ctx.xi
    reduced = np.einsum("lyu,l->uy", pxi, z_xi) + np.einsum("ul,lym,m->uy", z, pxi, ctx.xi)
    rescaled = -2 * eps * reduced
    target = (ctx.psi - 2 * eps) * (ctx.ricci + 2 * eps * ctx.g)
    return rescaled, _maxabs(rescaled - target)


def check_projectively_z_semisymmetric(ctx, tol=Tolerances().predicate):
    z = _z(ctx)
    P = projective_tensor(ctx.riemann, ctx.ricci)
    rescaled, fres = factorization_residual(ctx)
    return ConditionVerdict.from_residual(
        "projectively-z-semisymmetric",
        _maxabs(derivation_tensor(z, P)),
        tol,
        projective_norm=_maxabs(P),
        xi_reduction=_maxabs(rescaled),
        factorization_residual=fres,
        factor=abs(ctx.psi - 2 * ctx.epsilon),
    )


def equivalence_verdict(verdicts, tol=Tolerances().predicate):
    """Agreement of the four conditions that the theory declares equivalent."""
    statuses = [verdicts[name].status for name in EQUIVALENT_CONDITIONS]
    applicable = [s for s in statuses if s != "na"]
    aux = {name: verdicts[name].status for name in EQUIVALENT_CONDITIONS}
    if not applicable:
        return ConditionVerdict.not_applicable("equivalence", tol, **aux)
    agree = len(set(applicable)) == 1
    return ConditionVerdict("equivalence", 0.0 if agree else 1.0, tol, "pass" if agree else "fail", aux)


def evaluate_conditions(ctx, tolerances=Tolerances(), applicable=True):
    """All condition verdicts at one point, keyed by condition name."""
    tp, td = tolerances.predicate, tolerances.derivative
    if not applicable:
        return {name: ConditionVerdict.not_applicable(name, td if name in ("ricci-symmetric", "z-symmetric") else tp,
                                                      reason="structure checks failed")
                for name in CONDITIONS}
    out = {"einstein": check_einstein(ctx.ricci, ctx.g, ctx.epsilon, tp)}
    out["ricci-symmetric"] = check_ricci_symmetric(ctx, td)
    out["ricci-semisymmetric"] = check_ricci_semisymmetric(ctx, tp)
    out["z-symmetric"] = check_z_symmetric(ctx, td)
    out["z-semisymmetric"] = check_z_semisymmetric(ctx, tp)
    out["z-pseudosymmetric"] = check_z_pseudosymmetric(ctx, tp, einstein=out["einstein"])
    out["projectively-z-semisymmetric"] = check_projectively_z_semisymmetric(ctx, tp)
    out["equivalence"] = equivalence_verdict(out, tp)
    return out


def aggregate_status(statuses):
    """Fail if any point fails, na if none applies, pass otherwise."""
    statuses = list(statuses)
    if "fail" in statuses:
        return "fail"
    if all(s == "na" for s in statuses):
        return "na"
    return "pass"

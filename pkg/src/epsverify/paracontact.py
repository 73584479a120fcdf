"""Para-contact structures: axiom checks, curvature identities, models.

Structure components are stored in chart components: ``phi[i, j]`` is the
mixed tensor (row = upper index), ``xi`` has an upper index and ``eta`` a
lower one.  Every identity check works on a :class:`PointContext`, which is
basis-agnostic: the same residuals can be taken in the coordinate basis of
a chart or in an orthonormal frame.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import expr as ex
from .errors import ConfigError
from .geometry import (
    DIM,
    MetricField,
    Tolerances,
    covariant_derivative,
    evaluate_geometry,
)

IDENTITY_3 = np.eye(DIM)


@dataclass
class CheckReport:
    """Named residuals sharing one tolerance."""

    name: str
    residuals: dict
    tolerance: float
    applicable: bool = True

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)

    @property
    def status(self):
        if not self.applicable:
            return "na"
        return "pass" if self.max_residual < self.tolerance else "fail"

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class StructureField:
    phi: tuple
    xi: tuple
    eta: tuple
    psi: object
    epsilon: int

    @classmethod
    def from_strings(cls, phi, xi, eta, psi, epsilon, env):
        if epsilon not in (1, -1):
            raise ConfigError(f"epsilon must be +1 or -1, got {epsilon!r}")
        names = env.names
        return cls(
            tuple(tuple(ex.parse(s, names) for s in row) for row in phi),
            tuple(ex.parse(s, names) for s in xi),
            tuple(ex.parse(s, names) for s in eta),
            ex.parse(psi if psi is not None else "0", names),
            epsilon,
        )


@dataclass(frozen=True, eq=False)
class StructureEval:
    point: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    dphi: np.ndarray  # dphi[a, i, j]
    dxi: np.ndarray  # dxi[a, i]
    deta: np.ndarray  # deta[a, i]
    psi: float
    dpsi: np.ndarray
    epsilon: int


def evaluate_structure(structure, env, point):
    def jet(e):
        return ex.evaluate(e, env, point, 1)

    phi = [[jet(e) for e in row] for row in structure.phi]
    xi = [jet(e) for e in structure.xi]
    eta = [jet(e) for e in structure.eta]
    psi = jet(structure.psi)
    return StructureEval(
        point=np.asarray(point, dtype=float),
        phi=np.array([[j.value for j in row] for row in phi]),
        xi=np.array([j.value for j in xi]),
        eta=np.array([j.value for j in eta]),
        dphi=np.moveaxis(np.array([[j.grad for j in row] for row in phi]), -1, 0),
        dxi=np.array([j.grad for j in xi]).T,
        deta=np.array([j.grad for j in eta]).T,
        psi=psi.value,
        dpsi=psi.grad,
        epsilon=structure.epsilon,
    )


@dataclass(frozen=True, eq=False)
class PointContext:
    """Everything the identity and condition checks need at one point.

    ``riemann`` is the (1,3) tensor with ``riemann[l, i, j, k]`` the ``e_l``
    component of ``R(e_i, e_j) e_k``.  ``nabla_ricci`` and ``nabla_z`` carry
    the derivative slot first and exist only when a chart is available.
    """

    g: np.ndarray
    eta: np.ndarray
    xi: np.ndarray
    phi: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    psi: float
    epsilon: int
    nabla_ricci: np.ndarray = None
    nabla_z: np.ndarray = None
    source: str = "chart"
    point: tuple = None

    @property
    def has_chart(self):
        return self.nabla_ricci is not None

    @property
    def g_inv(self):
        return np.linalg.inv(self.g)


def chart_context(geom, sev):
    """Assemble a coordinate-basis context, including nabla S and nabla Z."""
    nabla_ricci = None
    nabla_z = None
    if geom.d_ricci is not None:
        nabla_ricci = covariant_derivative(geom.ricci, geom.d_ricci, geom)
        z = geom.ricci + sev.psi * geom.g
        dz = geom.d_ricci + np.einsum("a,ij->aij", sev.dpsi, geom.g) + sev.psi * geom.dg
        nabla_z = covariant_derivative(z, dz, geom)
    return PointContext(
        g=geom.g,
        eta=sev.eta,
        xi=sev.xi,
        phi=sev.phi,
        riemann=geom.riemann_13,
        ricci=geom.ricci,
        scalar=geom.scalar,
        psi=sev.psi,
        epsilon=sev.epsilon,
        nabla_ricci=nabla_ricci,
        nabla_z=nabla_z,
        source="chart",
        point=tuple(float(p) for p in geom.point),
    )


def orthonormal_frame(g):
    """Columns ``E`` with ``E.T @ g @ E`` diagonal with entries +-1."""
    w, v = np.linalg.eigh(g)
    return v / np.sqrt(np.abs(w))


def to_frame(ctx, frame=None):
    """Re-express ``ctx`` in the frame whose vectors are the columns of ``frame``.

    Defaults to a g-orthonormal frame, which removes chart scale from the
    condition residuals.
    """
    E = orthonormal_frame(ctx.g) if frame is None else frame
    Einv = np.linalg.inv(E)

    def low(T):
        for slot in range(T.ndim):
            T = np.moveaxis(np.tensordot(T, E, axes=([slot], [0])), -1, slot)
        return T

    riemann = np.einsum("pl,lijk,ia,jb,kc->pabc", Einv, ctx.riemann, E, E, E)
    return replace(
        ctx,
        g=low(ctx.g),
        eta=ctx.eta @ E,
        xi=Einv @ ctx.xi,
        phi=Einv @ ctx.phi @ E,
        riemann=riemann,
        ricci=low(ctx.ricci),
        nabla_ricci=None if ctx.nabla_ricci is None else low(ctx.nabla_ricci),
        nabla_z=None if ctx.nabla_z is None else low(ctx.nabla_z),
    )


def _maxabs(a):
    return float(np.max(np.abs(a)))


def check_structure_axioms(sev, g, tol=Tolerances().axiom):
    phi, xi, eta, eps = sev.phi, sev.xi, sev.eta, sev.epsilon
    res = {
        "phi_squared": _maxabs(phi @ phi - (IDENTITY_3 - np.outer(xi, eta))),
        "eta_xi": abs(float(eta @ xi) - 1.0),
        "phi_xi": _maxabs(phi @ xi),
        "eta_phi": _maxabs(eta @ phi),
        "g_phi_phi": _maxabs(phi.T @ g @ phi - g + eps * np.outer(eta, eta)),
        "g_phi_symmetric": _maxabs(g @ phi - phi.T @ g),
        "g_xi_eta": _maxabs(g @ xi - eps * eta),
        "g_xi_xi": abs(float(xi @ g @ xi) - eps),
    }
    return CheckReport("structure", res, tol)


def nabla_phi(sev, geom):
    """(nabla_i phi)^k_j as array [i, k, j]."""
    G = geom.Gamma
    return (
        sev.dphi
        + np.einsum("kim,mj->ikj", G, sev.phi)
        - np.einsum("mij,km->ikj", G, sev.phi)
    )


def nabla_xi(sev, geom):
    """(nabla_i xi)^k as array [i, k]."""
    return sev.dxi + np.einsum("kim,m->ik", geom.Gamma, sev.xi)


def check_para_sasakian(sev, geom, tol=Tolerances().axiom):
    """Residuals of the defining condition on nabla phi and of nabla xi = eps phi."""
    phi, xi, eta, eps, g = sev.phi, sev.xi, sev.eta, sev.epsilon, geom.g
    # -g(phi e_i, phi e_j) xi^k - eps eta_j (phi^2)^k_i, laid out [i, k, j]
    gpp = phi.T @ g @ phi
    phi2 = phi @ phi
    rhs = -np.einsum("ij,k->ikj", gpp, xi) - eps * np.einsum("j,ki->ikj", eta, phi2)
    res = {
        "nabla_phi": _maxabs(nabla_phi(sev, geom) - rhs),
        "nabla_xi": _maxabs(nabla_xi(sev, geom) - eps * phi.T),
    }
    return CheckReport("para-sasakian", res, tol)


def curvature_from_scalar(g, eta, xi, r, eps):
    """The (1,3) curvature of a para-Sasakian 3-manifold with scalar curvature r."""
    a = r / 2 + 2 * eps
    b = r / 2 + 3 * eps
    d = IDENTITY_3
    return a * (np.einsum("jk,li->lijk", g, d) - np.einsum("ik,lj->lijk", g, d)) - b * (
        np.einsum("jk,i,l->lijk", g, eta, xi)
        - np.einsum("ik,j,l->lijk", g, eta, xi)
        + eps * np.einsum("j,k,li->lijk", eta, eta, d)
        - eps * np.einsum("i,k,lj->lijk", eta, eta, d)
    )


def ricci_from_scalar(g, eta, r, eps):
    return (r / 2 + eps) * g - eps * (r / 2 + 3 * eps) * np.outer(eta, eta)


def identity_residuals(ctx):
    """Residuals of the curvature identities of a para-Sasakian 3-manifold."""
    R, g, eta, xi, eps, S = ctx.riemann, ctx.g, ctx.eta, ctx.xi, ctx.epsilon, ctx.ricci
    d = IDENTITY_3
    n = DIM
    r_xy_xi = np.einsum("lijk,k->lij", R, xi)
    r_xi_x_y = np.einsum("lijk,i->ljk", R, xi)
    r_xi_x_xi = np.einsum("ljk,k->lj", r_xi_x_y, xi)
    r04 = np.einsum("lijk,lm->ijkm", R, g)
    return {
        "eq_2_6": _maxabs(r_xy_xi - (np.einsum("i,lj->lij", eta, d) - np.einsum("j,li->lij", eta, d))),
        "eq_2_7": _maxabs(r_xi_x_y - (np.einsum("k,lj->ljk", eta, d) - eps * np.einsum("jk,l->ljk", g, xi))),
        "eq_2_8": _maxabs(r_xi_x_xi - (d - np.outer(xi, eta))),
        "eq_2_9": _maxabs(S @ xi + (n - 1) * eta),
        "eq_2_11": _maxabs(R - curvature_from_scalar(g, eta, xi, ctx.scalar, eps)),
        "eq_2_12": _maxabs(S - ricci_from_scalar(g, eta, ctx.scalar, eps)),
        "eq_3_9": _maxabs(r04 + np.swapaxes(r04, 2, 3)),
    }


def check_curvature_identities(ctx, tol=Tolerances().identity, applicable=True):
    """Identity residuals; ``applicable=False`` when the structure check failed."""
    return CheckReport("identities", identity_residuals(ctx), tol, applicable)


def synthetic_point_model(r, psi, epsilon):
    """Pointwise context built by formula in the frame (e1, e2, xi)."""
    if epsilon not in (1, -1):
        raise ConfigError(f"epsilon must be +1 or -1, got {epsilon!r}")
    g = np.diag([1.0, 1.0, float(epsilon)])
    xi = np.array([0.0, 0.0, 1.0])
    eta = np.array([0.0, 0.0, 1.0])
    phi = np.diag([1.0, 1.0, 0.0])
    R = curvature_from_scalar(g, eta, xi, r, epsilon)
    S = ricci_from_scalar(g, eta, r, epsilon)
    return PointContext(
        g=g, eta=eta, xi=xi, phi=phi, riemann=R, ricci=S, scalar=float(r),
        psi=float(psi), epsilon=epsilon, source="synthetic",
    )


@dataclass(frozen=True)
class Fact:
    """An expected property of a model and where it comes from ("literature" or "computed")."""

    name: str
    value: object
    source: str


@dataclass(frozen=True)
class ModelSpec:
    name: str
    env: ex.Env
    metric: MetricField
    structure: StructureField
    box: tuple = ((-1.0, 1.0),) * DIM
    facts: tuple = field(default=())

    @property
    def epsilon(self):
        return self.structure.epsilon

    def evaluate(self, point):
        """Geometry, structure values and the coordinate-basis context at ``point``."""
        geom = evaluate_geometry(self.metric, point)
        sev = evaluate_structure(self.structure, self.env, point)
        return geom, sev, chart_context(geom, sev)


STANDARD_PHI = (("1", "0", "0"), ("0", "1", "0"), ("0", "0", "0"))
STANDARD_XI = ("0", "0", "1")
STANDARD_ETA = ("0", "0", "1")

BUILTIN_METRICS = {
    "warped": ("exp(2*eps*z)", "exp(2*eps*z)", "eps"),
    "warped-curved": ("exp(2*eps*z)", "exp(2*eps*z)*(1 + x^2)", "eps"),
    "flat-control": ("1", "1", "eps"),
    "perturbed-control": ("exp(2*eps*z)*(1 + 0.1*x^2)", "exp(2*eps*z)*(1 + 0.1*z)", "eps"),
}


def _builtin_facts(name, eps):
    if name == "warped":
        return (
            Fact("para_sasakian", True, "computed"),
            Fact("scalar", -6.0 * eps, "literature"),
            Fact("einstein", True, "computed"),
        )
    if name == "warped-curved":
        return (Fact("para_sasakian", True, "computed"), Fact("einstein", False, "computed"))
    return (Fact("para_sasakian", False, "computed"),)


def make_model(name, coordinates, metric, phi, xi, eta, psi, epsilon, box=None, facts=()):
    """Build a :class:`ModelSpec` from expression strings."""
    if epsilon not in (1, -1):
        raise ConfigError(f"epsilon must be +1 or -1, got {epsilon!r}")
    env = ex.Env(tuple(coordinates), {"eps": float(epsilon)})
    return ModelSpec(
        name=name,
        env=env,
        metric=MetricField.from_strings(metric, env),
        structure=StructureField.from_strings(phi, xi, eta, psi, epsilon, env),
        box=tuple(tuple(b) for b in box) if box is not None else ((-1.0, 1.0),) * DIM,
        facts=tuple(facts),
    )


def builtin_model(name, epsilon, psi="0"):
    if name not in BUILTIN_METRICS:
        raise ConfigError(f"unknown built-in model {name!r}; choose from {sorted(BUILTIN_METRICS)}")
    diag = BUILTIN_METRICS[name]
    metric = [[diag[i] if i == j else "0" for j in range(DIM)] for i in range(DIM)]
    return make_model(
        name, ("x", "y", "z"), metric, STANDARD_PHI, STANDARD_XI, STANDARD_ETA,
        psi, epsilon, facts=_builtin_facts(name, epsilon),
    )

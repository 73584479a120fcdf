"""Levi-Civita geometry of a metric given in a 3-dimensional chart.

Array conventions (derivative indices always come first):

* ``dg[a, i, j]`` is the partial derivative along axis ``a`` of ``g_ij``.
* ``Gamma[k, i, j]`` is the Christoffel symbol of the second kind, and
  ``dGamma[a, k, i, j]`` its partial derivative along ``a``.
* ``riemann_13[l, i, j, k]`` is the ``e_l`` component of ``R(e_i, e_j) e_k``.
* ``riemann_04[i, j, k, m]`` is ``g(R(e_i, e_j) e_k, e_m)``.
* a covariant derivative of a (0,k) tensor puts the derivative slot first.

The curvature operator is ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``,
so hyperbolic space has negative sectional curvature and scalar curvature -6.
"""

from dataclasses import dataclass
import string

import numpy as np

from . import expr as ex
from .errors import ConfigError, EvaluationError

DIM = 3
DET_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Tolerances:
    """Pass thresholds by residual class; derivative errors grow with order."""

    axiom: float = 1e-9
    identity: float = 1e-8
    derivative: float = 1e-7
    predicate: float = 1e-8


@dataclass(frozen=True)
class MetricField:
    """A symmetric 3x3 matrix of expressions with its evaluation environment."""

    components: tuple
    env: ex.Env

    @classmethod
    def from_strings(cls, rows, env):
        names = env.names
        parsed = [[None] * DIM for _ in range(DIM)]
        for i in range(DIM):
            for j in range(DIM):
                parsed[i][j] = ex.parse(rows[i][j], names)
        for i in range(DIM):
            for j in range(i + 1, DIM):
                if parsed[i][j] != parsed[j][i]:
                    raise ConfigError(f"metric entries ({i},{j}) and ({j},{i}) differ")
        return cls(tuple(tuple(r) for r in parsed), env)

    @classmethod
    def diagonal(cls, entries, env):
        rows = [["0"] * DIM for _ in range(DIM)]
        for i, e in enumerate(entries):
            rows[i][i] = e
        return cls.from_strings(rows, env)

    def evaluate(self, point, order=3):
        """Metric value and chart derivatives up to ``order`` as arrays."""
        out = [np.zeros((DIM,) * (n + 2)) for n in range(order + 1)]
        for i in range(DIM):
            for j in range(i, DIM):
                jet = ex.evaluate(self.components[i][j], self.env, point, order)
                for n, comp in enumerate(jet.components()):
                    out[n][(...,) + (i, j)] = comp
                    out[n][(...,) + (j, i)] = comp
        return out


@dataclass(frozen=True, eq=False)
class ChartGeometry:
    point: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray
    Gamma: np.ndarray
    dGamma: np.ndarray
    riemann_13: np.ndarray
    riemann_04: np.ndarray
    ricci: np.ndarray
    scalar: float
    # first chart derivatives of the curvature, for nabla R and nabla S
    d_riemann_13: np.ndarray = None
    d_ricci: np.ndarray = None

    @property
    def index(self):
        """Number of negative eigenvalues of ``g``."""
        return int(np.sum(np.linalg.eigvalsh(self.g) < 0))


def _inverse_derivs(g0, g1, g2):
    ginv = np.linalg.inv(g0)
    ginv1 = -np.einsum("ij,ajk,kl->ail", ginv, g1, ginv)
    ginv2 = -(
        np.einsum("bij,ajk,kl->abil", ginv1, g1, ginv)
        + np.einsum("ij,abjk,kl->abil", ginv, g2, ginv)
        + np.einsum("ij,ajk,bkl->abil", ginv, g1, ginv1)
    )
    return ginv, ginv1, ginv2


def _christoffel_first(dg):
    """Gamma_{l i j} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij) along trailing axes.

    ``dg`` has shape (..., a, i, j) with ``a`` the innermost derivative axis.
    """
    return 0.5 * (
        np.einsum("...ijl->...lij", dg)
        + np.einsum("...jil->...lij", dg)
        - dg
    )


def evaluate_geometry(metric, point, with_curvature_derivatives=True):
    """Connection and curvature of ``metric`` at ``point``."""
    point = np.asarray(point, dtype=float)
    order = 3 if with_curvature_derivatives else 2
    g0, g1, g2, *rest = metric.evaluate(point, order)
    det = np.linalg.det(g0)
    if abs(det) < DET_THRESHOLD:
        raise EvaluationError("singular metric", point=point, value=det)
    ginv, ginv1, ginv2 = _inverse_derivs(g0, g1, g2)

    # first-kind symbols and their derivatives; derivative axes stay leading.
    c0 = _christoffel_first(g1)
    c1 = _christoffel_first(g2)
    gamma = np.einsum("kl,lij->kij", ginv, c0)
    dgamma = np.einsum("akl,lij->akij", ginv1, c0) + np.einsum("kl,alij->akij", ginv, c1)

    riemann = _riemann(gamma, dgamma)
    ricci = np.einsum("iijk->jk", riemann)
    scalar = float(np.einsum("jk,jk->", ginv, ricci))

    d_riemann = d_ricci = None
    if with_curvature_derivatives:
        g3 = rest[0]
        c2 = _christoffel_first(g3)
        d2gamma = (
            np.einsum("abkl,lij->abkij", ginv2, c0)
            + np.einsum("akl,blij->abkij", ginv1, c1)
            + np.einsum("bkl,alij->abkij", ginv1, c1)
            + np.einsum("kl,ablij->abkij", ginv, c2)
        )
        d_riemann = (
            np.einsum("ailjk->alijk", d2gamma)
            - np.einsum("ajlik->alijk", d2gamma)
            + np.einsum("alim,mjk->alijk", dgamma, gamma)
            + np.einsum("lim,amjk->alijk", gamma, dgamma)
            - np.einsum("aljm,mik->alijk", dgamma, gamma)
            - np.einsum("ljm,amik->alijk", gamma, dgamma)
        )
        d_ricci = np.einsum("aiijk->ajk", d_riemann)

    return ChartGeometry(
        point=point,
        g=g0,
        g_inv=ginv,
        dg=g1,
        Gamma=gamma,
        dGamma=dgamma,
        riemann_13=riemann,
        riemann_04=np.einsum("lijk,lm->ijkm", riemann, g0),
        ricci=ricci,
        scalar=scalar,
        d_riemann_13=d_riemann,
        d_ricci=d_ricci,
    )


def _riemann(gamma, dgamma):
    # R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
    return (
        np.einsum("iljk->lijk", dgamma)
        - np.einsum("jlik->lijk", dgamma)
        + np.einsum("lim,mjk->lijk", gamma, gamma)
        - np.einsum("ljm,mik->lijk", gamma, gamma)
    )


def covariant_derivative(T, dT, geom):
    """Covariant derivative of a (0,k) tensor ``T`` given its chart derivative.

    ``dT[a, j1, ..., jk]`` is the partial derivative along ``a``.  The result
    has the derivative slot first: ``(nabla T)[a, j1, ..., jk]``.
    """
    T = np.asarray(T)
    dT = np.asarray(dT)
    k = T.ndim
    if dT.shape != (DIM,) + T.shape:
        raise ValueError(f"derivative shape {dT.shape} does not match tensor shape {T.shape}")
    out = dT.copy()
    letters = string.ascii_lowercase[2 : 2 + k]
    for slot in range(k):
        t_idx = letters[:slot] + "z" + letters[slot + 1 :]
        out = out - np.einsum(f"za{letters[slot]},{t_idx}->a{letters}", geom.Gamma, T)
    return out


def raise_lower(T, slots, direction, geom):
    """Contract the named ``slots`` of ``T`` with ``g_inv`` (up) or ``g`` (down)."""
    T = np.asarray(T)
    if direction not in ("up", "down"):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    mat = geom.g_inv if direction == "up" else geom.g
    for slot in slots:
        if not 0 <= slot < T.ndim:
            raise ValueError(f"slot {slot} out of range for a rank-{T.ndim} tensor")
        T = np.moveaxis(np.tensordot(mat, T, axes=([1], [slot])), 0, slot)
    return T


def g_tensor(g):
    """G(X1, X2, X3, X4) = g((X1 ^ X2) X3, X4) = g23 g14 - g13 g24."""
    return np.einsum("jk,im->ijkm", g, g) - np.einsum("ik,jm->ijkm", g, g)


def constant_curvature_deviation(geom):
    """Max-norm of R - (r/6) G, zero exactly for constant curvature."""
    dev = geom.riemann_04 - geom.scalar / 6.0 * g_tensor(geom.g)
    return float(np.max(np.abs(dev)))


def metric_compatibility(geom):
    """Max |nabla g|, which vanishes for the Levi-Civita connection."""
    return float(np.max(np.abs(covariant_derivative(geom.g, geom.dg, geom))))

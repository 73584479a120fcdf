"""Truncated Taylor arithmetic ("jets") in three chart variables.

A :class:`Jet` of order ``m`` carries the value of a scalar field at a point
together with its partial derivatives up to order ``m`` (at most 3).
Derivatives are stored as plain derivative arrays, not Taylor coefficients:
``hess[i, j]`` is the second partial derivative, ``third[i, j, k]`` the
third.  All arithmetic truncates at the order of its operands.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigError, EvaluationError

DIM = 3
MAX_ORDER = 3

#: Default magnitude below which a divisor is treated as singular.
SINGULAR_THRESHOLD = 1e-12


def _sym3(u, h):
    """Symmetrize u_i h_jk over the three index positions (3 terms)."""
    t = u[:, None, None] * h[None, :, :]
    return t + t.transpose(1, 0, 2) + t.transpose(1, 2, 0)


@dataclass(frozen=True, eq=False)
class Jet:
    order: int
    value: float
    grad: np.ndarray = None
    hess: np.ndarray = None
    third: np.ndarray = None

    @classmethod
    def constant(cls, value, order):
        _check_order(order)
        return cls(
            order,
            float(value),
            np.zeros(DIM) if order >= 1 else None,
            np.zeros((DIM, DIM)) if order >= 2 else None,
            np.zeros((DIM, DIM, DIM)) if order >= 3 else None,
        )

    def components(self):
        """Tuple of present components, lowest order first."""
        return (self.value, self.grad, self.hess, self.third)[: self.order + 1]

    def partial(self, axis):
        """The jet of the partial derivative along ``axis`` (one order lower)."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet(
            self.order - 1,
            float(self.grad[axis]),
            None if self.hess is None else self.hess[axis].copy(),
            None if self.third is None else self.third[axis].copy(),
        )

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet(order, *self.components()[: order + 1])

    def __add__(self, other):
        return jet_arith("add", self, _coerce(other, self.order))

    __radd__ = __add__

    def __sub__(self, other):
        return jet_arith("sub", self, _coerce(other, self.order))

    def __rsub__(self, other):
        return jet_arith("sub", _coerce(other, self.order), self)

    def __mul__(self, other):
        return jet_arith("mul", self, _coerce(other, self.order))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return jet_arith("div", self, _coerce(other, self.order))

    def __rtruediv__(self, other):
        return jet_arith("div", _coerce(other, self.order), self)

    def __neg__(self):
        return jet_unary("neg", self)

    def __pow__(self, c):
        return jet_unary("pow_const", self, c)

    def __repr__(self):
        parts = [f"order={self.order}", f"value={self.value!r}"]
        if self.grad is not None:
            parts.append(f"grad={self.grad.tolist()}")
        return f"Jet({', '.join(parts)})"


def _check_order(order):
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= MAX_ORDER:
        raise ConfigError(f"jet order must be an integer in 0..{MAX_ORDER}, got {order!r}")


def _coerce(x, order):
    if isinstance(x, Jet):
        return x
    return Jet.constant(x, order)


def seed_coordinate(index, point, order):
    """Jet of the coordinate function ``x[index]`` at ``point``."""
    if not isinstance(index, (int, np.integer)) or not 0 <= index < DIM:
        raise ConfigError(f"coordinate index must be 0..{DIM - 1}, got {index!r}")
    _check_order(order)
    jet = Jet.constant(point[index], order)
    if order >= 1:
        jet.grad[index] = 1.0
    return jet


def _mul(a, b):
    out = [a.value * b.value]
    if a.order >= 1:
        out.append(a.value * b.grad + b.value * a.grad)
    if a.order >= 2:
        ab = np.multiply.outer(a.grad, b.grad)
        out.append(a.value * b.hess + b.value * a.hess + ab + ab.T)
    if a.order >= 3:
        out.append(
            a.value * b.third
            + b.value * a.third
            + _sym3(a.grad, b.hess)
            + _sym3(b.grad, a.hess)
        )
    return Jet(a.order, *out)


def jet_arith(op, a, b, threshold=SINGULAR_THRESHOLD):
    """Binary jet arithmetic for ``op`` in add, sub, mul, div."""
    if a.order != b.order:
        raise ValueError(f"jet orders differ: {a.order} vs {b.order}")
    if op == "add":
        return Jet(a.order, *(x + y for x, y in zip(a.components(), b.components())))
    if op == "sub":
        return Jet(a.order, *(x - y for x, y in zip(a.components(), b.components())))
    if op == "mul":
        return _mul(a, b)
    if op == "div":
        if abs(b.value) < threshold:
            raise EvaluationError("division by a near-zero value", value=b.value)
        return _mul(a, _compose(b, _reciprocal_derivs(b.value, a.order)))
    raise ValueError(f"unknown jet operation {op!r}")


def _compose(a, derivs):
    """Chain rule f(a) given derivs = (f, f', f'', f''') at a.value."""
    out = [float(derivs[0])]
    if a.order >= 1:
        out.append(derivs[1] * a.grad)
    if a.order >= 2:
        out.append(derivs[2] * np.multiply.outer(a.grad, a.grad) + derivs[1] * a.hess)
    if a.order >= 3:
        g = a.grad
        out.append(
            derivs[3] * np.einsum("i,j,k->ijk", g, g, g)
            + derivs[2] * _sym3(g, a.hess)
            + derivs[1] * a.third
        )
    return Jet(a.order, *out)


def _reciprocal_derivs(v, order):
    return [1 / v, -1 / v**2, 2 / v**3, -6 / v**4]


def _pow_derivs(v, c):
    derivs = []
    coef = 1.0
    is_int = float(c).is_integer()
    for k in range(MAX_ORDER + 1):
        if coef == 0.0:
            derivs.append(0.0)
        elif is_int and c - k < 0 and v == 0.0:
            raise EvaluationError(f"zero base raised to the negative power {c - k}", value=v)
        else:
            derivs.append(coef * v ** (c - k))
        coef *= c - k
    return derivs


def _unary_derivs(fn, v, c):
    if fn == "exp":
        e = math.exp(v)
        return [e, e, e, e]
    if fn == "log":
        if v <= 0:
            raise EvaluationError("log of a non-positive value", value=v)
        return [math.log(v), 1 / v, -1 / v**2, 2 / v**3]
    if fn == "sin":
        s, co = math.sin(v), math.cos(v)
        return [s, co, -s, -co]
    if fn == "cos":
        s, co = math.sin(v), math.cos(v)
        return [co, -s, -co, s]
    if fn == "tan":
        co = math.cos(v)
        if abs(co) < SINGULAR_THRESHOLD:
            raise EvaluationError("tan evaluated at a pole", value=v)
        t = math.tan(v)
        s2 = 1 + t * t
        return [t, s2, 2 * t * s2, 2 * s2 * (1 + 3 * t * t)]
    if fn == "sinh":
        s, ch = math.sinh(v), math.cosh(v)
        return [s, ch, s, ch]
    if fn == "cosh":
        s, ch = math.sinh(v), math.cosh(v)
        return [ch, s, ch, s]
    if fn == "tanh":
        t = math.tanh(v)
        s2 = 1 - t * t
        return [t, s2, -2 * t * s2, s2 * (6 * t * t - 2)]
    if fn == "sqrt":
        if v <= 0:
            raise EvaluationError("sqrt of a non-positive value", value=v)
        r = math.sqrt(v)
        return [r, 0.5 / r, -0.25 / (r * v), 0.375 / (r * v * v)]
    if fn == "pow_const":
        if c is None:
            raise ValueError("pow_const needs an exponent")
        c = float(c)
        if v <= 0 and not c.is_integer():
            raise EvaluationError(f"non-positive base raised to non-integer power {c}", value=v)
        return _pow_derivs(v, c)
    raise ValueError(f"unknown jet function {fn!r}")


def jet_unary(fn, a, c=None):
    """Apply an elementary function to a jet (Faa di Bruno, truncated)."""
    if fn == "neg":
        return Jet(a.order, *(-x for x in a.components()))
    return _compose(a, _unary_derivs(fn, a.value, c))


FD_STEPS = {2: 1e-4, 3: 1e-3}


def fd_oracle(field, point, order, rel_step=1e-5):
    """Central finite-difference estimates of grad / hess / third of ``field``.

    Steps are relative, ``step * max(1, |x_i|)``, with ``rel_step`` for the
    gradient and the coarser ``FD_STEPS`` entries for the Hessian and third
    derivatives (round-off grows like ``h ** -k``).  Returns a dict with keys ``grad``, ``hess``, ``third`` up to ``order``.
    """
    p = np.asarray(point, dtype=float)
    scale = np.maximum(1.0, np.abs(p))
    f = lambda q: float(field(q))
    out = {}

    def shifted(offsets, h):
        q = p.copy()
        for axis, s in offsets:
            q[axis] += s * h[axis]
        return f(q)

    if order >= 1:
        h = rel_step * scale
        out["grad"] = np.array(
            [(shifted([(i, 1)], h) - shifted([(i, -1)], h)) / (2 * h[i]) for i in range(DIM)]
        )
    if order >= 2:
        h = FD_STEPS[2] * scale
        hess = np.empty((DIM, DIM))
        f0 = f(p)
        for i in range(DIM):
            for j in range(i, DIM):
                if i == j:
                    val = (shifted([(i, 1)], h) - 2 * f0 + shifted([(i, -1)], h)) / h[i] ** 2
                else:
                    val = (
                        shifted([(i, 1), (j, 1)], h)
                        - shifted([(i, 1), (j, -1)], h)
                        - shifted([(i, -1), (j, 1)], h)
                        + shifted([(i, -1), (j, -1)], h)
                    ) / (4 * h[i] * h[j])
                hess[i, j] = hess[j, i] = val
        out["hess"] = hess
    if order >= 3:
        h = FD_STEPS[3] * scale
        third = np.empty((DIM, DIM, DIM))
        for i in range(DIM):
            for j in range(DIM):
                for k in range(DIM):
                    if not i <= j <= k:
                        continue
                    acc = 0.0
                    for si in (1, -1):
                        for sj in (1, -1):
                            for sk in (1, -1):
                                acc += si * sj * sk * shifted([(i, si), (j, sj), (k, sk)], h)
                    third[i, j, k] = acc / (8 * h[i] * h[j] * h[k])
        for i in range(DIM):
            for j in range(DIM):
                for k in range(DIM):
                    third[i, j, k] = third[tuple(sorted((i, j, k)))]
        out["third"] = third
    return out

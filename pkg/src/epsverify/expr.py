"""Closed-form scalar fields over chart coordinates.

Grammar (recursive descent)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | ident | ident '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-x^2``
is ``-(x^2)``.  Functions: exp, log, sin, cos, tan, sinh, cosh, tanh, sqrt.
The identifier ``pi`` is a constant.
"""

from dataclasses import dataclass, field
import math
import re

from . import jets
from .errors import ConfigError, EvaluationError, ParseError

FUNCTIONS = ("exp", "log", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sqrt")
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Sym:
    name: str
    offset: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: object
    right: object


Expr = (Num, Const, Sym, Unary, Binary)


@dataclass(frozen=True)
class Env:
    """Coordinate names and parameter bindings for evaluation."""

    coordinates: tuple = ("x", "y", "z")
    params: dict = field(default_factory=lambda: {"eps": 1.0})

    def __post_init__(self):
        coords = tuple(self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if len(coords) != 3 or len(set(coords)) != 3:
            raise ConfigError(f"need three distinct coordinate names, got {list(coords)}")
        clash = set(coords) & (set(self.params) | set(FUNCTIONS) | set(CONSTANTS))
        if clash:
            raise ConfigError(f"coordinate names clash with reserved names: {sorted(clash)}")
        eps = self.params.get("eps")
        if eps is not None and eps not in (1, -1):
            raise ConfigError(f"eps must be +1 or -1, got {eps!r}")

    @property
    def names(self):
        return set(self.coordinates) | set(self.params)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos,
                             ("number", "identifier", "operator"))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, expected):
        kind, value, offset = self.peek()
        what = "end of input" if kind == "end" else f"{value!r}"
        raise ParseError(f"unexpected {what}", self.text, offset, expected)

    def accept(self, *ops):
        kind, value, _ = self.peek()
        if kind == "op" and value in ops:
            self.i += 1
            return value
        return None

    def expect(self, op):
        if self.accept(op) is None:
            self.error((repr(op),))

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(("operator", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while (op := self.accept("+", "-")) is not None:
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while (op := self.accept("*", "/")) is not None:
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        if self.accept("-") is not None:
            return Unary("neg", self.factor())
        return self.power()

    def power(self):
        base = self.primary()
        if self.accept("^") is not None:
            return Binary("^", base, self.factor())
        return base

    def primary(self):
        kind, value, offset = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(value))
        if kind == "ident":
            self.advance()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            if value in CONSTANTS:
                return Const(value)
            return Sym(value, offset)
        if self.accept("(") is not None:
            node = self.expr()
            self.expect(")")
            return node
        self.error(("number", "identifier", "'('", "'-'"))


def parse(text, names=None):
    """Parse ``text`` into an immutable expression tree.

    If ``names`` is given, every free symbol must be among them; otherwise a
    :class:`ParseError` is raised at the symbol's offset.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", text if isinstance(text, str) else "", 0,
                         ("number", "identifier"))
    tree = _Parser(text).parse()
    if names is not None:
        check_symbols(tree, names, text)
    return tree


def symbols(node):
    """The free symbols of ``node`` in first-occurrence order."""
    out = []

    def walk(n):
        if isinstance(n, Sym):
            if n not in out:
                out.append(n)
        elif isinstance(n, Unary):
            walk(n.arg)
        elif isinstance(n, Binary):
            walk(n.left)
            walk(n.right)

    walk(node)
    return out


def check_symbols(node, names, text=""):
    names = set(names)
    for sym in symbols(node):
        if sym.name not in names:
            raise ParseError(f"undeclared identifier {sym.name!r}", text, max(sym.offset, 0),
                             sorted(names))


def to_string(node):
    """Render ``node`` so that :func:`parse` rebuilds the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, (Const, Sym)):
        return node.name
    if isinstance(node, Unary):
        if node.op == "neg":
            return f"-({to_string(node.arg)})"
        return f"{node.op}({to_string(node.arg)})"
    return f"({to_string(node.left)} {node.op} {to_string(node.right)})"


def _is_constant(node, coordinates):
    return not any(s.name in coordinates for s in symbols(node))


def evaluate(node, env, point, order=0):
    """Evaluate ``node`` at ``point`` as a :class:`~epsverify.jets.Jet`."""
    try:
        return _eval(node, env, point, order)
    except EvaluationError as exc:
        raise exc.at(point) from None


def _eval(node, env, point, order):
    if isinstance(node, Num):
        return jets.Jet.constant(node.value, order)
    if isinstance(node, Const):
        return jets.Jet.constant(CONSTANTS[node.name], order)
    if isinstance(node, Sym):
        if node.name in env.coordinates:
            return jets.seed_coordinate(env.coordinates.index(node.name), point, order)
        if node.name in env.params:
            return jets.Jet.constant(env.params[node.name], order)
        raise ConfigError(f"unbound symbol {node.name!r}")
    if isinstance(node, Unary):
        return jets.jet_unary(node.op, _eval(node.arg, env, point, order))
    if node.op == "^":
        base = _eval(node.left, env, point, order)
        if _is_constant(node.right, env.coordinates):
            c = _eval(node.right, env, point, 0).value
            return jets.jet_unary("pow_const", base, c)
        expo = _eval(node.right, env, point, order)
        return jets.jet_unary("exp", expo * jets.jet_unary("log", base))
    op = {"+": "add", "-": "sub", "*": "mul", "/": "div"}[node.op]
    return jets.jet_arith(op, _eval(node.left, env, point, order),
                          _eval(node.right, env, point, order))


def evaluate_float(node, env, point):
    """Plain float evaluation, without jets."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Sym):
        if node.name in env.coordinates:
            return float(point[env.coordinates.index(node.name)])
        if node.name in env.params:
            return float(env.params[node.name])
        raise ConfigError(f"unbound symbol {node.name!r}")
    if isinstance(node, Unary):
        v = evaluate_float(node.arg, env, point)
        if node.op == "neg":
            return -v
        return getattr(math, node.op)(v)
    a = evaluate_float(node.left, env, point)
    b = evaluate_float(node.right, env, point)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    return a**b

"""
Tiny expression language for user-defined generators and terminal conditions

Tokens come from one regex; a recursive-descent parser builds a tree of
nodes evaluated with numpy. The grammar is documented in EXPRESSION_GUIDE.md.
"""

import math

import numpy as np
import regex

from .spec import AssumptionParams, GeneratorSpec, TerminalCondition, norm
from ..errors import ExpressionSyntaxError

TOKEN_PATTERN = regex.compile(
    r"""
    (?P<space>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>\*\*|<=|>=|==|!=|[-+*/^(),<>\[\]])
    """,
    regex.VERBOSE,
)

FUNCTIONS = {
    "abs": (1, np.abs),
    "exp": (1, np.exp),
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "ln": (1, np.log),
    "log": (1, np.log),
    "sqrt": (1, np.sqrt),
    "cbrt": (1, np.cbrt),
    "sign": (1, np.sign),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
}

CONSTANTS = {"pi": math.pi, "e": math.e}

COMPARISONS = {
    "<": np.less,
    "<=": np.less_equal,
    ">": np.greater,
    ">=": np.greater_equal,
    "==": np.equal,
    "!=": np.not_equal,
}

BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.divide,
    "^": np.power,
}


class Token:
    __slots__ = ("kind", "text", "column")

    def __init__(self, kind, text, column):
        self.kind = kind
        self.text = text
        self.column = column

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, col={self.column})"


def tokenize(text):
    """Split text into tokens; columns are 1-based"""
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[position]!r} at column {position + 1}", column=position + 1
            )
        kind = match.lastgroup
        if kind != "space":
            value = match.group(kind)
            tokens.append(Token(kind, "^" if value == "**" else value, position + 1))
        position = match.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


# Evaluation tree

class Number:
    def __init__(self, value):
        self.value = value
        self.variables = frozenset()

    def evaluate(self, env):
        return self.value


class Variable:
    def __init__(self, name):
        self.name = name
        self.variables = frozenset({name})

    def evaluate(self, env):
        return env[self.name]


class Norm:
    def __init__(self, vector):
        self.vector = vector
        self.variables = frozenset({vector})

    def evaluate(self, env):
        return norm(env[self.vector])


class Component:
    def __init__(self, vector, index):
        self.vector = vector
        self.index = index
        self.variables = frozenset({vector})

    def evaluate(self, env):
        return env[self.vector][..., self.index]


class Unary:
    def __init__(self, operand):
        self.operand = operand
        self.variables = operand.variables

    def evaluate(self, env):
        return np.negative(self.operand.evaluate(env))


class Binary:
    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right
        self.variables = left.variables | right.variables

    def evaluate(self, env):
        return BINARY[self.op](self.left.evaluate(env), self.right.evaluate(env))


class Call:
    def __init__(self, name, args):
        self.name = name
        self.args = args
        self.variables = frozenset().union(*(arg.variables for arg in args))

    def evaluate(self, env):
        return FUNCTIONS[self.name][1](*(arg.evaluate(env) for arg in self.args))


class Indicator:
    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right
        self.variables = left.variables | right.variables

    def evaluate(self, env):
        return np.where(COMPARISONS[self.op](self.left.evaluate(env), self.right.evaluate(env)), 1.0, 0.0)


class Parser:
    """Recursive-descent parser over a token list"""

    def __init__(self, text, d=1, horizon=None):
        self.text = text
        self.d = d
        self.horizon = horizon
        self.tokens = tokenize(text)
        self.position = 0

    @property
    def current(self):
        return self.tokens[self.position]

    def error(self, message, token=None):
        token = token or self.current
        return ExpressionSyntaxError(f"{message} at column {token.column}", column=token.column)

    def advance(self):
        token = self.current
        self.position += 1
        return token

    def expect(self, text):
        if self.current.text != text:
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def parse(self):
        if self.current.kind == "end":
            raise self.error("empty expression")
        node = self.expression()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.current.text!r}")
        return node

    # expression := term (('+' | '-') term)*
    def expression(self):
        node = self.term()
        while self.current.text in ("+", "-"):
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    # term := unary (('*' | '/') unary)*
    def term(self):
        node = self.unary()
        while self.current.text in ("*", "/"):
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    # unary := ('-' | '+') unary | power
    def unary(self):
        if self.current.text == "-":
            self.advance()
            return Unary(self.unary())
        if self.current.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    # power := atom ('^' unary)?, right-associative
    def power(self):
        node = self.atom()
        if self.current.text == "^":
            self.advance()
            node = Binary("^", node, self.unary())
        return node

    def atom(self):
        token = self.current
        if token.kind == "number":
            self.advance()
            return Number(float(token.text))
        if token.text == "(":
            self.advance()
            node = self.expression()
            self.expect(")")
            return node
        if token.kind == "name":
            return self.named(self.advance())
        raise self.error(f"unexpected {token.text or 'end of input'!r}")

    def named(self, token):
        name = token.text
        if name == "ind":
            self.expect("(")
            left = self.expression()
            op = self.current.text
            if op not in COMPARISONS:
                raise self.error("ind() needs a comparison")
            self.advance()
            right = self.expression()
            self.expect(")")
            return Indicator(op, left, right)
        if name in FUNCTIONS:
            arity = FUNCTIONS[name][0]
            self.expect("(")
            args = [self.expression()]
            while self.current.text == ",":
                self.advance()
                args.append(self.expression())
            self.expect(")")
            if len(args) != arity:
                raise self.error(f"{name}() takes {arity} argument(s), got {len(args)}", token)
            return Call(name, args)
        if name in ("b", "z"):
            if self.current.text == "[":
                self.advance()
                index_token = self.current
                if index_token.kind != "number" or not index_token.text.isdigit():
                    raise self.error("component index must be a positive integer")
                self.advance()
                self.expect("]")
                index = int(index_token.text)
                if not 1 <= index <= self.d:
                    raise self.error(f"component {name}[{index}] outside 1..{self.d}", index_token)
                return Component(name, index - 1)
            return Component(name, 0)
        if name in ("absb", "absz"):
            return Norm(name[-1])
        if name in ("t", "y"):
            return Variable(name)
        if name == "T":
            if self.horizon is None:
                raise self.error("T is not available in this expression", token)
            return Number(float(self.horizon))
        if name in CONSTANTS:
            return Number(CONSTANTS[name])
        raise self.error(f"unknown name {name!r}", token)


class Expression:
    """Parsed expression with its source text and the variables it reads"""

    def __init__(self, text, root):
        self.text = text
        self.root = root
        self.variables = root.variables

    def evaluate(self, t=0.0, b=None, y=0.0, z=None, d=1):
        b = np.zeros(d) if b is None else np.asarray(b, dtype=float)
        z = np.zeros(d) if z is None else np.asarray(z, dtype=float)
        t = np.asarray(t, dtype=float)
        y = np.asarray(y, dtype=float)
        env = {"t": t, "b": b, "y": y, "z": z}
        shape = np.broadcast_shapes(t.shape, b.shape[:-1], y.shape, z.shape[:-1])
        with np.errstate(all="ignore"):
            value = self.root.evaluate(env)
        return np.broadcast_to(np.asarray(value, dtype=float), shape).copy()

    def __repr__(self):
        return f"Expression({self.text!r})"


def parse_expression(text, d=1, horizon=None):
    """
    Parse an expression into an evaluation tree

    Args:
        text: Source text
        d: Brownian dimension (bounds component indices)
        horizon: Value bound to the name T, or None to reject T

    Returns:
        Expression

    Raises:
        ExpressionSyntaxError: with the 1-based column of the offending token
    """
    return Expression(text, Parser(text, d=d, horizon=horizon).parse())


def expression_generator(text, d=1, horizon=1.0, params=None, label=None):
    """
    Build a GeneratorSpec from expression text

    Args:
        text: Expression over t, T, y, b, z
        d: Brownian dimension
        horizon: Value of T
        params: AssumptionParams to declare (defaults to no claimed flags)
        label: Label (defaults to "expr:<text>")
    """
    expression = parse_expression(text, d=d, horizon=horizon)

    def func(t, b, y, z):
        env = {"t": t, "b": b, "y": y, "z": z}
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.broadcast_to(np.asarray(expression.root.evaluate(env), dtype=float), shape).copy()

    return GeneratorSpec(
        func=func,
        params=params or AssumptionParams(),
        label=label or f"expr:{text}",
        d=d,
        depends_on=expression.variables,
    )


def expression_terminal(text, d=1, label=None):
    """Build a TerminalCondition from an expression over b (read as B_T)"""
    expression = parse_expression(text, d=d)
    illegal = expression.variables - {"b"}
    if illegal:
        raise ExpressionSyntaxError(f"terminal expressions may only read b, found {sorted(illegal)}", column=1)

    def func(b_T):
        env = {"b": b_T}
        return np.broadcast_to(np.asarray(expression.root.evaluate(env), dtype=float), np.shape(b_T)[:-1]).copy()

    return TerminalCondition(func=func, label=label or f"expr:{text}", integrability_note="user expression")

"""First-order formulas and terms, evaluated by direct model checking.

The grammar covers what finite-scale work needs: relation atoms, term
equalities (terms may stack partial function applications on variables
and constants), negation, conjunction, disjunction, implication, and
quantifiers ranging over the finite domain.

Partial functions give atoms a strictness convention: an atom whose term
fails to denote is false (so its negation is true).  Variables are
written ``x0, x1, ...``; a formula's arity is one past its largest free
variable index.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .structures import Structure


class FormulaError(ValueError):
    """Parse or evaluation error for formulas."""


# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class ConstTerm:
    name: str


@dataclass(frozen=True)
class FuncTerm:
    name: str
    args: tuple


Term = Var | ConstTerm | FuncTerm


def eval_term(M: Structure, term, env: dict[int, int]) -> int | None:
    """Value of a term under an assignment; None when undefined."""
    if isinstance(term, Var):
        if term.index not in env:
            raise FormulaError(f"unbound variable x{term.index}")
        return env[term.index]
    if isinstance(term, ConstTerm):
        if term.name not in M.signature.constants:
            raise FormulaError(f"unknown constant {term.name!r}")
        return M.const(term.name)
    vals = []
    for a in term.args:
        v = eval_term(M, a, env)
        if v is None:
            return None
        vals.append(v)
    if M.signature.fn_arity(term.name) != len(vals):
        raise FormulaError(f"function {term.name!r} applied to {len(vals)} arguments")
    return M.fn_value(term.name, tuple(vals))


def term_variables(term) -> set[int]:
    if isinstance(term, Var):
        return {term.index}
    if isinstance(term, ConstTerm):
        return set()
    out: set[int] = set()
    for a in term.args:
        out |= term_variables(a)
    return out


# -- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class RelAtom:
    name: str
    args: tuple


@dataclass(frozen=True)
class EqAtom:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    kind: str  # "exists" | "forall"
    var: int
    body: "Formula"


Formula = RelAtom | EqAtom | Not | And | Or | Implies | Quant


def free_variables(phi) -> set[int]:
    if isinstance(phi, RelAtom):
        out: set[int] = set()
        for t in phi.args:
            out |= term_variables(t)
        return out
    if isinstance(phi, EqAtom):
        return term_variables(phi.left) | term_variables(phi.right)
    if isinstance(phi, Not):
        return free_variables(phi.sub)
    if isinstance(phi, (And, Or, Implies)):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, Quant):
        return free_variables(phi.body) - {phi.var}
    raise FormulaError(f"not a formula: {phi!r}")


def formula_arity(phi) -> int:
    fv = free_variables(phi)
    return max(fv) + 1 if fv else 0


def eval_formula(M: Structure, phi, env: dict[int, int]) -> bool:
    """Truth under an assignment.  Atoms with undefined terms are false."""
    if isinstance(phi, RelAtom):
        if M.signature.rel_arity(phi.name) != len(phi.args):
            raise FormulaError(f"relation {phi.name!r} applied to {len(phi.args)} arguments")
        vals = []
        for t in phi.args:
            v = eval_term(M, t, env)
            if v is None:
                return False
            vals.append(v)
        return M.holds(phi.name, tuple(vals))
    if isinstance(phi, EqAtom):
        lv = eval_term(M, phi.left, env)
        rv = eval_term(M, phi.right, env)
        return lv is not None and rv is not None and lv == rv
    if isinstance(phi, Not):
        return not eval_formula(M, phi.sub, env)
    if isinstance(phi, And):
        return eval_formula(M, phi.left, env) and eval_formula(M, phi.right, env)
    if isinstance(phi, Or):
        return eval_formula(M, phi.left, env) or eval_formula(M, phi.right, env)
    if isinstance(phi, Implies):
        return (not eval_formula(M, phi.left, env)) or eval_formula(M, phi.right, env)
    if isinstance(phi, Quant):
        envs = (env | {phi.var: v} for v in range(M.size))
        if phi.kind == "exists":
            return any(eval_formula(M, phi.body, e) for e in envs)
        return all(eval_formula(M, phi.body, e) for e in envs)
    raise FormulaError(f"not a formula: {phi!r}")


def eval_on_tuple(M: Structure, phi, values) -> bool:
    """Evaluate with x_i bound to values[i]."""
    return eval_formula(M, phi, {i: v for i, v in enumerate(values)})


# -- concrete syntax ---------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(->)|([()=,.~&|])|(forall|exists)\b|([A-Za-z_][A-Za-z0-9_]*)|(<=|>=|<|>)|$)")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and not text[pos:].strip():
            break
        if m.end() == pos:
            raise FormulaError(f"cannot tokenize at {text[pos:pos + 12]!r}")
        tok = next(g for g in m.groups() if g is not None) if any(m.groups()) else None
        if tok is None:
            break
        out.append(tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaError("unexpected end of formula")
        if expected is not None and tok != expected:
            raise FormulaError(f"expected {expected!r}, found {tok!r}")
        self.i += 1
        return tok

    def parse_formula(self):
        if self.peek() in ("forall", "exists"):
            kind = self.take()
            var = self._variable(self.take())
            self.take(".")
            return Quant(kind, var, self.parse_formula())
        return self.parse_implies()

    def parse_implies(self):
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self):
        node = self.parse_and()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self):
        node = self.parse_unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self):
        tok = self.peek()
        if tok in ("forall", "exists"):
            # quantifier scope extends as far right as possible
            return self.parse_formula()
        if tok == "~":
            self.take()
            return Not(self.parse_unary())
        if tok == "(":
            save = self.i
            self.take()
            try:
                inner = self.parse_formula()
                self.take(")")
            except FormulaError:
                # parenthesized term on the left of an equality
                self.i = save
                return self.parse_atom()
            if self.peek() == "=":
                raise FormulaError("parenthesized formula used as a term")
            return inner
        return self.parse_atom()

    def parse_atom(self):
        name = self.take()
        if name in (")", "(", ",", "=", ".", "~", "&", "|", "->"):
            raise FormulaError(f"unexpected token {name!r}")
        if self.peek() == "(":
            self.take()
            args = [self.parse_term()]
            while self.peek() == ",":
                self.take()
                args.append(self.parse_term())
            self.take(")")
            if self.peek() == "=":
                self.take()
                return EqAtom(FuncTerm(name, tuple(args)), self.parse_term())
            return RelAtom(name, tuple(args))
        left = self._name_term(name)
        self.take("=")
        return EqAtom(left, self.parse_term())

    def parse_term(self):
        name = self.take()
        if self.peek() == "(":
            self.take()
            args = [self.parse_term()]
            while self.peek() == ",":
                self.take()
                args.append(self.parse_term())
            self.take(")")
            return FuncTerm(name, tuple(args))
        return self._name_term(name)

    @staticmethod
    def _variable(tok: str) -> int:
        m = re.fullmatch(r"x(\d+)", tok)
        if not m:
            raise FormulaError(f"expected a variable (x0, x1, ...), found {tok!r}")
        return int(m.group(1))

    @staticmethod
    def _name_term(tok: str):
        m = re.fullmatch(r"x(\d+)", tok)
        if m:
            return Var(int(m.group(1)))
        return ConstTerm(tok)


def parse_formula(text: str):
    """Parse one formula from concrete syntax.

    Symbols are resolved against a signature only at evaluation time, with
    one syntactic exception: a bare name in term position parses as a
    constant, ``x<digits>`` as a variable.
    """
    p = _Parser(_tokenize(text))
    phi = p.parse_formula()
    if p.peek() is not None:
        raise FormulaError(f"trailing input at {p.peek()!r}")
    return phi


def parse_term(text: str):
    p = _Parser(_tokenize(text))
    t = p.parse_term()
    if p.peek() is not None:
        raise FormulaError(f"trailing input at {p.peek()!r}")
    return t


def render_term(t) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, ConstTerm):
        return t.name
    return f"{t.name}({', '.join(render_term(a) for a in t.args)})"


def render_formula(phi) -> str:
    """Concrete syntax; parses back to an equal tree."""
    if isinstance(phi, RelAtom):
        return f"{phi.name}({', '.join(render_term(a) for a in phi.args)})"
    if isinstance(phi, EqAtom):
        return f"{render_term(phi.left)} = {render_term(phi.right)}"
    if isinstance(phi, Not):
        return f"~({render_formula(phi.sub)})"
    if isinstance(phi, And):
        return f"({render_formula(phi.left)} & {render_formula(phi.right)})"
    if isinstance(phi, Or):
        return f"({render_formula(phi.left)} | {render_formula(phi.right)})"
    if isinstance(phi, Implies):
        return f"({render_formula(phi.left)} -> {render_formula(phi.right)})"
    if isinstance(phi, Quant):
        return f"{phi.kind} x{phi.var}. ({render_formula(phi.body)})"
    raise FormulaError(f"not a formula: {phi!r}")

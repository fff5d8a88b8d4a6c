"""First-order arithmetic formulas: AST, parser, classical evaluation.

Terms are built from variables, numerals, successor, sum, and product.
Atoms are equations, strict inequalities, and named relation symbols.
Bounded quantifiers are surface sugar only: the parser rewrites
`forall x < t. p` into a guarded unbounded quantifier, and the guarded
shape is what the classifier and the realizer builder recognize.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True, slots=True)
class NVar:
    name: str


@dataclass(frozen=True, slots=True)
class Lit:
    value: int


@dataclass(frozen=True, slots=True)
class Succ:
    arg: "TermAst"


@dataclass(frozen=True, slots=True)
class Plus:
    left: "TermAst"
    right: "TermAst"


@dataclass(frozen=True, slots=True)
class Times:
    left: "TermAst"
    right: "TermAst"


TermAst = NVar | Lit | Succ | Plus | Times


def eval_term(t: TermAst, env: dict) -> int:
    match t:
        case NVar(name):
            # carriers may bind non-numeric points; arithmetic on one fails
            # downstream, but a bare variable (relation argument) passes through
            return env[name]
        case Lit(k):
            return k
        case Succ(a):
            return eval_term(a, env) + 1
        case Plus(a, b):
            return eval_term(a, env) + eval_term(b, env)
        case Times(a, b):
            return eval_term(a, env) * eval_term(b, env)
    raise TypeError(t)


def term_vars(t: TermAst) -> frozenset[str]:
    match t:
        case NVar(name):
            return frozenset({name})
        case Lit(_):
            return frozenset()
        case Succ(a):
            return term_vars(a)
        case Plus(a, b) | Times(a, b):
            return term_vars(a) | term_vars(b)
    raise TypeError(t)


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True, slots=True)
class Eq:
    left: TermAst
    right: TermAst


@dataclass(frozen=True, slots=True)
class Less:
    left: TermAst
    right: TermAst


@dataclass(frozen=True, slots=True)
class Rel:
    name: str
    args: tuple[TermAst, ...]


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class All:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Ex:
    var: str
    body: "Formula"


Formula = Eq | Less | Rel | And | Or | Imp | All | Ex


def free_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Eq(l, r) | Less(l, r):
            return term_vars(l) | term_vars(r)
        case Rel(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= term_vars(a)
            return out
        case And(a, b) | Or(a, b) | Imp(a, b):
            return free_vars(a) | free_vars(b)
        case All(v, body) | Ex(v, body):
            return free_vars(body) - {v}
    raise TypeError(phi)


def subst_term(t: TermAst, name: str, value: int) -> TermAst:
    match t:
        case NVar(n):
            return Lit(value) if n == name else t
        case Lit(_):
            return t
        case Succ(a):
            return Succ(subst_term(a, name, value))
        case Plus(a, b):
            return Plus(subst_term(a, name, value), subst_term(b, name, value))
        case Times(a, b):
            return Times(subst_term(a, name, value), subst_term(b, name, value))
    raise TypeError(t)


def subst(phi: Formula, name: str, value: int) -> Formula:
    """Plug a numeral in for a free variable, respecting shadowing."""
    match phi:
        case Eq(l, r):
            return Eq(subst_term(l, name, value), subst_term(r, name, value))
        case Less(l, r):
            return Less(subst_term(l, name, value), subst_term(r, name, value))
        case Rel(rn, args):
            return Rel(rn, tuple(subst_term(a, name, value) for a in args))
        case And(a, b):
            return And(subst(a, name, value), subst(b, name, value))
        case Or(a, b):
            return Or(subst(a, name, value), subst(b, name, value))
        case Imp(a, b):
            return Imp(subst(a, name, value), subst(b, name, value))
        case All(v, body):
            return phi if v == name else All(v, subst(body, name, value))
        case Ex(v, body):
            return phi if v == name else Ex(v, subst(body, name, value))
    raise TypeError(phi)


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    match phi:
        case And(a, b) | Or(a, b) | Imp(a, b):
            yield from subformulas(a)
            yield from subformulas(b)
        case All(_, body) | Ex(_, body):
            yield from subformulas(body)


def bound_of(phi: Formula) -> tuple[str, TermAst, Formula] | None:
    """The (var, bound, body) of a guarded quantifier, if shaped that way."""
    match phi:
        case All(v, Imp(Less(NVar(w), t), body)) if w == v and v not in term_vars(t):
            return v, t, body
        case Ex(v, And(Less(NVar(w), t), body)) if w == v and v not in term_vars(t):
            return v, t, body
    return None


def is_delta0(phi: Formula) -> bool:
    """Every quantifier guarded by a bound not mentioning its own variable."""
    match phi:
        case Eq(_, _) | Less(_, _) | Rel(_, _):
            return True
        case And(a, b) | Or(a, b) | Imp(a, b):
            return is_delta0(a) and is_delta0(b)
        case All(_, _) | Ex(_, _):
            got = bound_of(phi)
            return got is not None and is_delta0(got[2])
    raise TypeError(phi)


def truth(phi: Formula, env: dict | None = None,
          relations: dict | None = None) -> bool:
    """Classical truth over the naturals; quantifiers must be guarded."""
    env = env or {}
    match phi:
        case Eq(l, r):
            return eval_term(l, env) == eval_term(r, env)
        case Less(l, r):
            return eval_term(l, env) < eval_term(r, env)
        case Rel(name, args):
            if not relations or name not in relations:
                raise ValueError(f"relation {name} has no interpretation")
            pts = tuple(eval_term(a, env) for a in args)
            return bool(relations[name](pts))
        case And(a, b):
            return truth(a, env, relations) and truth(b, env, relations)
        case Or(a, b):
            return truth(a, env, relations) or truth(b, env, relations)
        case Imp(a, b):
            return (not truth(a, env, relations)) or truth(b, env, relations)
        case All(_, _) | Ex(_, _):
            got = bound_of(phi)
            if got is None:
                raise ValueError("unbounded quantifier has no classical "
                                 "evaluation here")
            v, t, _ = got
            n = eval_term(t, env)
            picks = (truth(phi.body, {**env, v: k}, relations)
                     for k in range(n))
            # the guard is part of the body, so evaluate the full body
            return all(picks) if isinstance(phi, All) else any(picks)
    raise TypeError(phi)


def truth_over(phi: Formula, points: tuple[int, ...], env: dict | None = None,
               relations: dict | None = None) -> bool:
    """Classical truth with quantifiers ranging over an explicit carrier."""
    env = env or {}
    match phi:
        case All(v, body):
            return all(truth_over(body, points, {**env, v: k}, relations)
                       for k in points)
        case Ex(v, body):
            return any(truth_over(body, points, {**env, v: k}, relations)
                       for k in points)
        case And(a, b):
            return (truth_over(a, points, env, relations)
                    and truth_over(b, points, env, relations))
        case Or(a, b):
            return (truth_over(a, points, env, relations)
                    or truth_over(b, points, env, relations))
        case Imp(a, b):
            return ((not truth_over(a, points, env, relations))
                    or truth_over(b, points, env, relations))
        case _:
            return truth(phi, env, relations)


# ---------------------------------------------------------------------------
# printing


def show_term(t: TermAst) -> str:
    match t:
        case NVar(name):
            return name
        case Lit(k):
            return str(k)
        case Succ(a):
            return f"S {show_term(a)}"
        case Plus(a, b):
            return f"{show_term(a)} + {show_term(b)}"
        case Times(a, b):
            la = show_term(a) if not isinstance(a, Plus) else f"({show_term(a)})"
            rb = show_term(b) if not isinstance(b, (Plus, Times)) else f"({show_term(b)})"
            return f"{la} * {rb}"
    raise TypeError(t)


def show_formula(phi: Formula) -> str:
    match phi:
        case Eq(l, r):
            return f"{show_term(l)} = {show_term(r)}"
        case Less(l, r):
            return f"{show_term(l)} < {show_term(r)}"
        case Rel(name, args):
            return f"{name}({', '.join(show_term(a) for a in args)})"
        case And(a, b):
            return f"{_wrap(a, (Or, Imp, All, Ex))} /\\ {_wrap(b, (And, Or, Imp, All, Ex))}"
        case Or(a, b):
            return f"{_wrap(a, (Imp, All, Ex))} \\/ {_wrap(b, (Or, Imp, All, Ex))}"
        case Imp(a, b):
            return f"{_wrap(a, (Imp, All, Ex))} -> {show_formula(b)}"
        case All(v, body):
            return f"forall {v}. {show_formula(body)}"
        case Ex(v, body):
            return f"exists {v}. {show_formula(body)}"
    raise TypeError(phi)


def _wrap(phi: Formula, looser: tuple) -> str:
    s = show_formula(phi)
    return f"({s})" if isinstance(phi, looser) else s


# ---------------------------------------------------------------------------
# parsing


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_SYMBOLS = ("->", "\\/", "/\\", "(", ")", ".", ",", "=", "<", "+", "*")


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                out.append(("sym", sym, i))
                i += len(sym)
                break
        else:
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                out.append(("num", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                out.append(("name", text[i:j], i))
                i = j
            else:
                raise FormulaSyntaxError(f"stray character {ch!r}", i)
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self) -> tuple[str, str, int]:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> None:
        kind, got, pos = self.take()
        if got != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {got or 'end'!r}", pos)

    def formula(self) -> Formula:
        kind, val, pos = self.peek()
        if val in ("forall", "exists"):
            self.take()
            k2, var, p2 = self.take()
            if k2 != "name" or var in ("forall", "exists", "S"):
                raise FormulaSyntaxError("expected a variable", p2)
            bound: TermAst | None = None
            if self.peek()[1] == "<":
                self.take()
                bound = self.term()
            self.expect(".")
            body = self.formula()
            if val == "forall":
                return (All(var, body) if bound is None
                        else All(var, Imp(Less(NVar(var), bound), body)))
            return (Ex(var, body) if bound is None
                    else Ex(var, And(Less(NVar(var), bound), body)))
        return self.imp()

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.formula() if self.peek()[1] in ("forall", "exists")
                       else self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek()[1] == "\\/":
            self.take()
            if self.peek()[1] in ("forall", "exists"):
                return Or(out, self.formula())
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.atom()
        while self.peek()[1] == "/\\":
            self.take()
            if self.peek()[1] in ("forall", "exists"):
                return And(out, self.formula())
            out = And(out, self.atom())
        return out

    def atom(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "(":
            # a parenthesized formula, unless the suffix continues a term
            mark = self.i
            self.take()
            try:
                inner = self.formula()
                self.expect(")")
                if self.peek()[1] not in ("=", "<", "+", "*"):
                    return inner
            except FormulaSyntaxError:
                pass
            self.i = mark
            return self._relational()
        if kind == "name" and val[0].isupper() and val != "S":
            self.take()
            self.expect("(")
            args = [self.term()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.term())
            self.expect(")")
            return Rel(val, tuple(args))
        return self._relational()

    def _relational(self) -> Formula:
        left = self.term()
        kind, op, pos = self.take()
        if op == "=":
            return Eq(left, self.term())
        if op == "<":
            return Less(left, self.term())
        raise FormulaSyntaxError(f"expected '=' or '<', found {op or 'end'!r}", pos)

    def term(self) -> TermAst:
        out = self.factor()
        while self.peek()[1] == "+":
            self.take()
            out = Plus(out, self.factor())
        return out

    def factor(self) -> TermAst:
        out = self.prim()
        while self.peek()[1] == "*":
            self.take()
            out = Times(out, self.prim())
        return out

    def prim(self) -> TermAst:
        kind, val, pos = self.take()
        if val == "S":
            return Succ(self.prim())
        if kind == "num":
            return Lit(int(val))
        if kind == "name" and val not in ("forall", "exists"):
            return NVar(val)
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        raise FormulaSyntaxError(f"expected a term, found {val or 'end'!r}", pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    out = p.formula()
    kind, val, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {val!r}", pos)
    return out

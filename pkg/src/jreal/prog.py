"""Shared object-level program library.

Small combinator programs used across the workbench: tagging, guarded
conditionals, Peano arithmetic, and sequence surgery.  Everything here is a
plain closed ``Term``; callers embed these terms (or their codes) into larger
programs.

Convention: boolean-valued programs return 0 for true and 1 for false, so
``ifz`` branches on them directly.
"""

from __future__ import annotations

import itertools

from .bracket import lam
from .terms import (
    App,
    CONS,
    FIX,
    IFZ,
    LEN,
    PRED,
    PROJ,
    SUCC,
    Num,
    Term,
    Var,
    ap,
)

_fresh = itertools.count()


def gensym(base: str = "_z") -> str:
    return f"{base}{next(_fresh)}"


def ite(cond: Term, then_t: Term, else_t: Term) -> Term:
    """Guarded conditional: both branches are thunked, so recursion under a
    branch does not unfold unless selected."""
    z = gensym()
    return App(ap(IFZ, cond, lam(z, then_t), lam(z, else_t)), Num(0))


def ifz_raw(cond: Term, then_t: Term, else_t: Term) -> Term:
    """Strict conditional; only safe when both branches are cheap values."""
    return ap(IFZ, cond, then_t, else_t)


def fixlam(self_name: str, *parts: str | Term) -> Term:
    """Recursive function: fix (\\self arg1 ... . body)."""
    return App(FIX, lam(self_name, *parts))


def tag0(t: Term) -> Term:
    """<0, t>"""
    return ap(CONS, Num(0), ap(CONS, t, Num(0)))


def tag1(t: Term) -> Term:
    """<1, t>"""
    return ap(CONS, Num(1), ap(CONS, t, Num(0)))


def seq2(a: Term, b: Term) -> Term:
    """<a, b>"""
    return ap(CONS, a, ap(CONS, b, Num(0)))


def p0(t: Term) -> Term:
    return ap(PROJ, t, Num(0))


def p1(t: Term) -> Term:
    return ap(PROJ, t, Num(1))


def _v(n: str) -> Var:
    return Var(n)


# ---------------------------------------------------------------------------
# arithmetic

# add x y = if y = 0 then x else succ (add x (pred y))
ADD = fixlam(
    "add", "x", "y",
    ite(_v("y"), _v("x"), App(SUCC, ap(_v("add"), _v("x"), App(PRED, _v("y"))))),
)

# mul x y = if y = 0 then 0 else x + mul x (pred y)
MUL = fixlam(
    "mul", "x", "y",
    ite(_v("y"), Num(0), ap(ADD, _v("x"), ap(_v("mul"), _v("x"), App(PRED, _v("y"))))),
)

# monus x y = if y = 0 then x else monus (pred x) (pred y)
MONUS = fixlam(
    "mns", "x", "y",
    ite(_v("y"), _v("x"), ap(_v("mns"), App(PRED, _v("x")), App(PRED, _v("y")))),
)

# eq01 x y: 0 iff x = y
EQ01 = lam(
    "x", "y",
    ifz_raw(ap(ADD, ap(MONUS, _v("x"), _v("y")), ap(MONUS, _v("y"), _v("x"))),
            Num(0), Num(1)),
)

# lt01 x y: 0 iff x < y
LT01 = lam(
    "x", "y",
    ifz_raw(ap(MONUS, App(SUCC, _v("x")), _v("y")), Num(0), Num(1)),
)

# mod x k, diverges for k = 0 (callers guard)
MOD = fixlam(
    "md", "x", "k",
    ite(ap(LT01, _v("x"), _v("k")), _v("x"),
        ap(_v("md"), ap(MONUS, _v("x"), _v("k")), _v("k"))),
)

# ---------------------------------------------------------------------------
# sequence surgery

# suffix s i = <s_i, ..., s_{len-1}>
SUFFIX = fixlam(
    "suf", "s", "i",
    ite(ap(LT01, _v("i"), App(LEN, _v("s"))),
        ap(CONS, ap(PROJ, _v("s"), _v("i")), ap(_v("suf"), _v("s"), App(SUCC, _v("i")))),
        Num(0)),
)

# snoc s v = s ++ <v>
SNOC = fixlam(
    "sn", "s", "v",
    ite(_v("s"),
        ap(CONS, _v("v"), Num(0)),
        ap(CONS, ap(PROJ, _v("s"), Num(0)),
           ap(_v("sn"), ap(SUFFIX, _v("s"), Num(1)), _v("v")))),
)

# horner evaluation of a coefficient sequence <c0, c1, ...> at n
POLYEVAL = fixlam(
    "pe", "c", "n",
    ite(_v("c"), Num(0),
        ap(ADD, ap(PROJ, _v("c"), Num(0)),
           ap(MUL, _v("n"), ap(_v("pe"), ap(SUFFIX, _v("c"), Num(1)), _v("n"))))),
)

# quasi-polynomial evaluation: data = <m, <coeffs per residue>>
QPEVAL = lam(
    "d", "n",
    ap(POLYEVAL,
       ap(PROJ, ap(PROJ, _v("d"), Num(1)), ap(MOD, _v("n"), ap(PROJ, _v("d"), Num(0)))),
       _v("n")),
)

# table = <<key, val>, ...>; first matching key wins, default 0
LOOKUP = fixlam(
    "lk", "t", "x",
    ite(_v("t"), Num(0),
        ite(ap(EQ01, ap(PROJ, ap(PROJ, _v("t"), Num(0)), Num(0)), _v("x")),
            ap(PROJ, ap(PROJ, _v("t"), Num(0)), Num(1)),
            ap(_v("lk"), ap(SUFFIX, _v("t"), Num(1)), _v("x")))),
)


def ite_table(scrut: Term, pairs, default: Term) -> Term:
    """Finite dispatch unrolled to nested equality tests at build time.

    Linear in the table with small constants, unlike a LOOKUP spine; only
    usable when the keys are small numerals, since numeral equality walks
    the smaller operand.
    """
    out = default
    for k, v in reversed(tuple(pairs)):
        out = ite(ap(EQ01, scrut, Num(k)), Num(v), out)
    return out

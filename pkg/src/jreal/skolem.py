"""A countable nonstandard extension of the naturals with decidable order.

The carrier is built from quasi-polynomial representatives.  A diagonal
construction walks the graded enumeration and maintains a descending chain
of definable sets: at each step the newcomer is compared against every
distinct function seen so far, the live set splits into the cells of one
displayed union (below the least, equal to it, strictly between neighbours,
and so on, above the greatest), and the first infinite cell survives.  A
strictly increasing selector picks one fresh witness from each live set;
two representatives name the same element exactly when they agree along the
selector's tail, and that agreement is read off a finite sign matrix.

The payoff is a structure where order and equality between elements are
decided by finite polynomial comparisons, embedded copies of the naturals
sit below every unbounded element, and "is this element a natural number"
is itself decidable, so the standardness split carries an honest realizer
over the induced assembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from math import lcm

from . import coding
from .assemblies import (
    FiniteAssembly,
    Morphism,
    NatAssembly,
    Subobject,
    TrackReport,
    check_tracking,
    subobject_check,
)
from .bracket import lam
from .certs import CheckPolicy
from .formulas import (
    All,
    And,
    Eq,
    Formula,
    Imp,
    Less,
    Lit,
    NVar,
    Or,
    Plus,
    Rel,
    Succ,
    TermAst,
    Times,
    free_vars,
    show_formula,
    truth,
    truth_over,
)
from .jsets import Finite
from .prog import ADD, EQ01, LT01, MOD, MUL, SUFFIX, fixlam, ite, p0, p1, seq2, tag0
from .quasipoly import (
    FULL_SET,
    DefinableSet,
    QuasiPoly,
    canon,
    compare_on_class,
    const,
    enumerate_qp,
    parse_qp,
    qp_add,
    qp_compose,
    qp_mul,
    show_qp,
)
from .realizes import Env, Verdict3, jrealizes
from .terms import CONS, K, LEN, PROJ, SUCC, App, Num, Var, ap, encode_term

# ---------------------------------------------------------------------------
# the refinement chain


@dataclass(frozen=True, slots=True)
class ChainState:
    """Functions 0..k incorporated, with the surviving definable set, the
    selector prefix, and the settled pairwise order."""

    k: int
    live: DefinableSet
    psi: tuple[int, ...]
    signs: tuple[tuple[str, ...], ...]
    reps: tuple[QuasiPoly, ...]


def initial_chain() -> ChainState:
    return ChainState(0, FULL_SET, (0,), (("=",),), (const(0),))


_FLIP = {"<": ">", ">": "<", "=": "="}


def _classes(signs: tuple[tuple[str, ...], ...]) -> list[list[int]]:
    """Indices grouped by settled equality, ordered ascending."""
    groups: list[list[int]] = []
    for i in range(len(signs)):
        for g in groups:
            if signs[i][g[0]] == "=":
                g.append(i)
                break
        else:
            groups.append([i])
    groups.sort(key=cmp_to_key(
        lambda a, b: -1 if signs[a[0]][b[0]] == "<" else 1))
    return groups


def _position(new: QuasiPoly, betas: tuple[QuasiPoly, ...], modulus: int,
              residue: int, t0: int) -> tuple[int, int]:
    """Cell index of the newcomer on one residue class, by binary search
    against the ascending restrictions; even cells are gaps, odd are ties."""
    lo, hi = 0, len(betas)
    thr = t0
    while lo < hi:
        mid = (lo + hi) // 2
        rel, t = compare_on_class(new, betas[mid], modulus, residue)
        thr = max(thr, t)
        if rel == "=":
            return 2 * mid + 1, thr
        if rel == "<":
            hi = mid
        else:
            lo = mid + 1
    return 2 * lo, thr


def _reduce(ds: DefinableSet) -> DefinableSet:
    for d in range(1, ds.modulus + 1):
        if ds.modulus % d:
            continue
        base = frozenset(r % d for r in ds.residues)
        if ds.residues == frozenset(
                r for r in range(ds.modulus) if r % d in base):
            return DefinableSet(d, base, ds.threshold)
    return ds


def extend_chain(state: ChainState) -> ChainState:
    new = enumerate_qp(state.k + 1)
    classes = _classes(state.signs)
    betas = tuple(state.reps[g[0]] for g in classes)
    modulus = state.live.modulus
    for qp in (new,) + betas:
        modulus = lcm(modulus, qp.modulus)

    cells: dict[int, tuple[list[int], int]] = {}
    for r in range(modulus):
        if r % state.live.modulus not in state.live.residues:
            continue
        cell, thr = _position(new, betas, modulus, r, state.live.threshold)
        res, t = cells.get(cell, ([], state.live.threshold))
        res.append(r)
        cells[cell] = (res, max(t, thr))

    chosen = min(cells)
    res, thr = cells[chosen]
    live = _reduce(DefinableSet(modulus, frozenset(res), thr))

    n_classes = len(betas)
    def rel_to(ci: int) -> str:
        if chosen == 2 * n_classes:
            return ">"
        if chosen % 2:
            j = chosen // 2
            if ci == j:
                return "="
            return state.signs[classes[j][0]][classes[ci][0]]
        return ">" if ci < chosen // 2 else "<"

    class_of = [0] * (state.k + 1)
    for ci, g in enumerate(classes):
        for i in g:
            class_of[i] = ci
    new_row = tuple(rel_to(class_of[i]) for i in range(state.k + 1)) + ("=",)
    signs = tuple(row + (_FLIP[new_row[i]],)
                  for i, row in enumerate(state.signs)) + (new_row,)

    return ChainState(state.k + 1, live,
                      state.psi + (live.least_above(state.psi[-1]),),
                      signs, state.reps + (new,))


def sign(state: ChainState, i: int, j: int) -> str:
    """Settled order of enumerated functions i and j along the selector."""
    if not (0 <= i <= state.k and 0 <= j <= state.k):
        raise ValueError(f"extend the chain to {max(i, j)} first")
    return state.signs[i][j]


def show_chain(state: ChainState) -> str:
    live = state.live
    res = ",".join(str(r) for r in sorted(live.residues))
    tail = ",".join(str(p) for p in state.psi[-6:])
    return (f"chain k={state.k} live=(mod {live.modulus}: {{{res}}} "
            f"from {live.threshold}) classes={len(_classes(state.signs))} "
            f"psi tail=[...{tail}]")


# ---------------------------------------------------------------------------
# elements and the model interface


@dataclass(frozen=True, slots=True)
class ModelElem:
    rep: QuasiPoly


def iota(n: int) -> ModelElem:
    """The embedded natural n."""
    return ModelElem(const(n))


def apply_fn(f: QuasiPoly, e: ModelElem) -> ModelElem:
    """The function f applied inside the model: compose with the
    representative.  Well defined on classes; tests audit that."""
    return ModelElem(qp_compose(f, e.rep))


def show_elem(e: ModelElem) -> str:
    return f"[{show_qp(e.rep)}]"


class Model:
    """Mutable chain holder; every query extends the chain as needed and
    answers exactly."""

    def __init__(self, state: ChainState | None = None):
        self.state = state or initial_chain()
        self._sign_memo: dict[tuple[QuasiPoly, QuasiPoly], str] = {}

    def ensure(self, k: int) -> ChainState:
        while self.state.k < k:
            self.state = extend_chain(self.state)
        return self.state

    # -- comparison of arbitrary representatives --------------------------

    def sign_qp(self, f: QuasiPoly, g: QuasiPoly) -> str:
        """Settled order of two representatives along the selector tail.

        Refines the chain until every live residue class reports the same
        eventual relation; confinement to a single class modulo any fixed
        modulus happens after finitely many steps, so this terminates."""
        key = (f, g)
        hit = self._sign_memo.get(key)
        if hit is not None:
            return hit
        while True:
            rels = self._class_rels(f, g)
            if len(rels) == 1:
                rel = rels.pop()
                self._sign_memo[key] = rel
                self._sign_memo[(g, f)] = _FLIP[rel]
                return rel
            self.state = extend_chain(self.state)

    def _class_rels(self, f: QuasiPoly, g: QuasiPoly) -> set[str]:
        live = self.state.live
        modulus = lcm(live.modulus, f.modulus, g.modulus)
        return {compare_on_class(f, g, modulus, r)[0]
                for r in range(modulus)
                if r % live.modulus in live.residues}

    def settle_threshold(self, f: QuasiPoly, g: QuasiPoly) -> int:
        """Past this value the settled relation holds at every live point."""
        self.sign_qp(f, g)
        live = self.state.live
        modulus = lcm(live.modulus, f.modulus, g.modulus)
        return max(compare_on_class(f, g, modulus, r)[1]
                   for r in range(modulus)
                   if r % live.modulus in live.residues)

    def eq(self, a: ModelElem, b: ModelElem) -> bool:
        return self.sign_qp(a.rep, b.rep) == "="

    def lt(self, a: ModelElem, b: ModelElem) -> bool:
        return self.sign_qp(a.rep, b.rep) == "<"


# ---------------------------------------------------------------------------
# standardness


def standard_value(model: Model, e: ModelElem) -> int | None:
    """The natural this element embeds, or None when it sits above all.

    Restricted to the live set the representative either ends up constant
    (one residue class survives with one constant polynomial) or stays
    nonconstant on every class forever; both outcomes are detected
    syntactically, so the loop always exits."""
    rep = e.rep
    while True:
        live = model.state.live
        modulus = lcm(live.modulus, rep.modulus)
        polys = {rep.poly_at(r) for r in range(modulus)
                 if r % live.modulus in live.residues}
        if all(len(p) > 1 for p in polys):
            return None
        if all(len(p) <= 1 for p in polys):
            vals = {p[0] if p else 0 for p in polys}
            if len(vals) == 1:
                return vals.pop()
        model.state = extend_chain(model.state)


def is_standard(model: Model, e: ModelElem) -> bool:
    return standard_value(model, e) is not None


# ---------------------------------------------------------------------------
# quantifier-free truth in the model


def term_rep(t: TermAst, asn: dict[str, ModelElem]) -> QuasiPoly:
    match t:
        case NVar(name):
            if name not in asn:
                raise ValueError(f"unassigned variable {name}")
            return asn[name].rep
        case Lit(k):
            return const(k)
        case Succ(a):
            return qp_add(term_rep(a, asn), const(1))
        case Plus(a, b):
            return qp_add(term_rep(a, asn), term_rep(b, asn))
        case Times(a, b):
            return qp_mul(term_rep(a, asn), term_rep(b, asn))
    raise TypeError(t)


def _is_qf(phi: Formula) -> bool:
    match phi:
        case Eq(_, _) | Less(_, _):
            return True
        case And(a, b) | Or(a, b) | Imp(a, b):
            return _is_qf(a) and _is_qf(b)
    return False


def truth_qf(model: Model, phi: Formula, asn: dict[str, ModelElem]) -> bool:
    """Exact truth of a quantifier-free formula at model elements."""
    match phi:
        case Eq(l, r):
            return model.sign_qp(term_rep(l, asn), term_rep(r, asn)) == "="
        case Less(l, r):
            return model.sign_qp(term_rep(l, asn), term_rep(r, asn)) == "<"
        case And(a, b):
            return truth_qf(model, a, asn) and truth_qf(model, b, asn)
        case Or(a, b):
            return truth_qf(model, a, asn) or truth_qf(model, b, asn)
        case Imp(a, b):
            return (not truth_qf(model, a, asn)) or truth_qf(model, b, asn)
        case Rel(name, _):
            raise ValueError(f"relation {name} has no limit interpretation")
    raise ValueError("quantifier-free formulas only")


# ---------------------------------------------------------------------------
# truth transfer


@dataclass(frozen=True, slots=True)
class TransferReport:
    formula: str
    mode: str                      # "exact" or "sampled"
    limit_truth: bool | None
    standard_truth: bool | None
    window: tuple[int, int]        # selector index range, half open
    disagreements: tuple[str, ...]
    caveats: tuple[str, ...]

    @property
    def consistent(self) -> bool:
        return not self.disagreements


def _atoms(phi: Formula):
    match phi:
        case Eq(l, r) | Less(l, r):
            yield l, r
        case And(a, b) | Or(a, b) | Imp(a, b):
            yield from _atoms(a)
            yield from _atoms(b)


def transfer_check(model: Model, phi: Formula, asn: dict[str, ModelElem],
                   window: int = 24) -> TransferReport:
    """Compare limit truth, truth at selector points, and truth at the
    embedded naturals.  Exact for quantifier-free input; quantified input
    gets a sampled consistency report only."""
    missing = free_vars(phi) - set(asn)
    if missing:
        raise ValueError(f"unassigned free variables: {sorted(missing)}")
    if _is_qf(phi):
        return _transfer_qf(model, phi, asn, window)
    return _transfer_sampled(model, phi, asn, window)


def _transfer_qf(model: Model, phi: Formula, asn, window: int) -> TransferReport:
    lt = truth_qf(model, phi, asn)
    t_max = max((model.settle_threshold(term_rep(l, asn), term_rep(r, asn))
                 for l, r in _atoms(phi)), default=0)
    while model.state.psi[-1] < t_max:
        model.state = extend_chain(model.state)
    n0 = model.state.k
    model.ensure(n0 + window)
    psi = model.state.psi
    disagreements = []
    for n in range(n0, n0 + window):
        env = {v: e.rep.value(psi[n]) for v, e in asn.items()}
        if truth(phi, env) != lt:
            disagreements.append(f"selector point psi({n})={psi[n]} disagrees")
    st = None
    values = {v: standard_value(model, e) for v, e in asn.items()}
    if all(val is not None for val in values.values()):
        st = truth(phi, values)
        if st != lt:
            disagreements.append("embedded-argument truth differs")
    return TransferReport(show_formula(phi), "exact", lt, st,
                          (n0, n0 + window), tuple(disagreements), ())


_QUANT_SAMPLE = 48


def _transfer_sampled(model: Model, phi: Formula, asn, window: int) -> TransferReport:
    n0 = model.state.k
    model.ensure(n0 + window)
    psi = model.state.psi
    sample = tuple(range(_QUANT_SAMPLE))
    verdicts = []
    for n in range(n0, n0 + window):
        env = {v: e.rep.value(psi[n]) for v, e in asn.items()}
        verdicts.append(truth_over(phi, sample, env))
    disagreements = ()
    if len(set(verdicts)) > 1:
        flips = [n0 + i for i in range(1, window) if verdicts[i] != verdicts[i - 1]]
        disagreements = (f"sampled verdict flips at selector indices {flips}",)
    return TransferReport(
        show_formula(phi), "sampled", None, None, (n0, n0 + window),
        disagreements,
        (f"quantifiers sampled over a {_QUANT_SAMPLE}-point range",
         "quantified input: consistency report only"))


# ---------------------------------------------------------------------------
# realizer data for elements: <description, selector prefix>

# description = <modulus, <coefficient rows>>, directly evaluable by the
# shared quasi-polynomial interpreter; the prefix pins the selector values
# the description is read along


def qp_data(qp: QuasiPoly) -> int:
    rows = coding.encode_seq([coding.encode_seq(cs) for cs in qp.residues])
    return coding.pair(qp.modulus, rows)


def elem_code(qp: QuasiPoly, psi_code: int) -> int:
    return coding.pair(qp_data(qp), psi_code)


def decode_elem_code(code: int) -> tuple[int, tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """(modulus, raw coefficient rows, selector prefix) of a realizer."""
    data, psi_code = coding.unpair(code)
    m, rows_code = coding.unpair(data)
    rows = tuple(coding.decode_seq(rc) for rc in coding.decode_seq(rows_code))
    return m, rows, coding.decode_seq(psi_code)


# python mirrors of the object-level tracker arithmetic; kept untrimmed and
# unreduced so mirror output equals machine output verbatim

def mirror_add(d1: int, d2: int) -> int:
    m1, rows1 = _split_data(d1)
    m2, rows2 = _split_data(d2)
    m = _slow_lcm(m1, m2)
    rows = [_mirror_padd(rows1[r % m1], rows2[r % m2]) for r in range(m)]
    return _join_data(m, rows)


def mirror_mul(d1: int, d2: int) -> int:
    m1, rows1 = _split_data(d1)
    m2, rows2 = _split_data(d2)
    m = _slow_lcm(m1, m2)
    rows = [_mirror_pmul(rows1[r % m1], rows2[r % m2]) for r in range(m)]
    return _join_data(m, rows)


def mirror_succ(d: int) -> int:
    m, rows = _split_data(d)
    return _join_data(m, [(r[0] + 1,) + r[1:] if r else (1,) for r in rows])


def mirror_iota(n: int) -> int:
    return _join_data(1, [(n,)])


def _split_data(d: int) -> tuple[int, list[tuple[int, ...]]]:
    m, rows_code = coding.unpair(d)
    return m, [coding.decode_seq(rc) for rc in coding.decode_seq(rows_code)]


def _join_data(m: int, rows) -> int:
    return coding.pair(m, coding.encode_seq(
        [coding.encode_seq(r) for r in rows]))


def _slow_lcm(a: int, b: int) -> int:
    t = a
    while t % b:
        t += a
    return t


def _mirror_padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return (a[0] + b[0],) + _mirror_padd(a[1:], b[1:])


def _mirror_pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return ()
    shifted = _mirror_pmul(a[1:], b)
    return _mirror_padd(tuple(a[0] * c for c in b),
                        ((0,) + shifted) if shifted else ())


# ---------------------------------------------------------------------------
# object-level tracker programs


def _r(n: str) -> Var:
    return Var(n)


# lcm by stepping: least multiple of the start that the second divides
_LCM_T = fixlam(
    "lc", "t", "step", "m",
    ite(ap(EQ01, ap(MOD, _r("t"), _r("m")), Num(0)), _r("t"),
        ap(_r("lc"), ap(ADD, _r("t"), _r("step")), _r("step"), _r("m"))))

_PADD_T = fixlam(
    "pa", "a", "b",
    ite(_r("a"), _r("b"),
        ite(_r("b"), _r("a"),
            ap(CONS, ap(ADD, ap(PROJ, _r("a"), Num(0)), ap(PROJ, _r("b"), Num(0))),
               ap(_r("pa"), ap(SUFFIX, _r("a"), Num(1)), ap(SUFFIX, _r("b"), Num(1)))))))

_SCALE_T = fixlam(
    "sc", "c", "s",
    ite(_r("s"), Num(0),
        ap(CONS, ap(MUL, _r("c"), ap(PROJ, _r("s"), Num(0))),
           ap(_r("sc"), _r("c"), ap(SUFFIX, _r("s"), Num(1))))))

_SHIFT_T = lam("s", ite(_r("s"), Num(0), ap(CONS, Num(0), _r("s"))))

_PMUL_T = fixlam(
    "pm", "a", "b",
    ite(_r("a"), Num(0),
        ap(_PADD_T, ap(_SCALE_T, ap(PROJ, _r("a"), Num(0)), _r("b")),
           App(_SHIFT_T, ap(_r("pm"), ap(SUFFIX, _r("a"), Num(1)), _r("b"))))))


def _rows_loop(body_row, bound):
    """Builds <row(0), ..., row(bound-1)> left to right."""
    return ap(fixlam(
        "go", "r",
        ite(ap(EQ01, _r("r"), bound), Num(0),
            ap(CONS, body_row(_r("r")), ap(_r("go"), App(SUCC, _r("r")))))),
        Num(0))


def _binop_data_term(row_op) -> object:
    """Shared skeleton: lift both descriptions to the joint modulus and
    combine coefficient rows pointwise."""
    d1, d2 = _r("d1"), _r("d2")
    m1, m2 = p0(d1), p0(d2)
    rows1, rows2 = p1(d1), p1(d2)
    def row(r):
        return ap(row_op,
                  ap(PROJ, rows1, ap(MOD, r, m1)),
                  ap(PROJ, rows2, ap(MOD, r, m2)))
    body = ap(lam("L", seq2(_r("L"), _rows_loop(row, _r("L")))),
              ap(_LCM_T, m1, m1, m2))
    return lam("d1", "d2", body)


ADD_DATA_T = _binop_data_term(_PADD_T)
MUL_DATA_T = _binop_data_term(_PMUL_T)

SUCC_DATA_T = lam(
    "d",
    seq2(p0(_r("d")),
         ap(fixlam(
             "go", "rows",
             ite(_r("rows"), Num(0),
                 ap(CONS,
                    ap(lam("row",
                           ite(_r("row"), ap(CONS, Num(1), Num(0)),
                               ap(CONS, App(SUCC, ap(PROJ, _r("row"), Num(0))),
                                  ap(SUFFIX, _r("row"), Num(1))))),
                       ap(PROJ, _r("rows"), Num(0))),
                    ap(_r("go"), ap(SUFFIX, _r("rows"), Num(1)))))),
            p1(_r("d")))))


def _tracker_code(data_term_on_qp) -> int:
    """Unary tracker: rebuild <description', prefix> from <description, prefix>."""
    return encode_term(lam(
        "r", tag0(seq2(App(data_term_on_qp, p0(_r("r"))), p1(_r("r"))))))


def succ_tracker_code() -> int:
    return _tracker_code(SUCC_DATA_T)


def binop_tracker_code(data_term) -> int:
    """Tracker on a paired realizer <r1, r2>; the prefix rides along from
    the left component."""
    w = _r("w")
    return encode_term(lam(
        "w", tag0(seq2(
            ap(data_term, p0(p0(w)), p0(p1(w))),
            p1(p0(w))))))


def iota_tracker_code(psi_code: int) -> int:
    return encode_term(lam(
        "n", tag0(seq2(
            seq2(Num(1), ap(CONS, ap(CONS, _r("n"), Num(0)), Num(0))),
            Num(psi_code)))))


# the standardness branch: a description is embedded iff its modulus is 1
# and its single coefficient row is at most a constant

def standard_split_code(k0_code: int) -> int:
    """Code whose value at any element realizer is closure evidence for
    "embedded, witnessed by the realizer itself" or "not embedded, with the
    refutation map vacuous"."""
    k = _r("k")
    desc = p0(k)
    row0 = ap(PROJ, p1(desc), Num(0))
    left = seq2(Num(0), k)
    right = seq2(Num(1), seq2(seq2(Num(0), k), Num(k0_code)))
    body = ite(ap(EQ01, p0(desc), Num(1)),
               ite(ap(LT01, App(LEN, row0), Num(2)), left, right),
               right)
    return encode_term(lam("k", tag0(body)))


_EMPTY = Finite(frozenset())
_K0_CODE = encode_term(App(K, Num(0)))

STANDARD_SPLIT_FORMULA = All(
    "y", Or(Rel("St", (NVar("y"),)),
            Imp(Rel("St", (NVar("y"),)), Eq(Lit(0), Succ(Lit(0))))))


# ---------------------------------------------------------------------------
# the induced assembly over a finite element sample


@dataclass(frozen=True, slots=True)
class ModelAssembly:
    assembly: FiniteAssembly
    standard: Subobject
    standard_points: tuple[ModelElem, ...]
    standard_report: TrackReport
    morphism_reports: tuple[tuple[str, TrackReport], ...]
    split_code: int
    split_verdict: Verdict3
    prefix_len: int


def default_elements() -> tuple[ModelElem, ...]:
    n = ident_elem().rep
    nonstd = (n, qp_add(n, const(1)), qp_add(n, const(2)), qp_add(n, const(5)),
              qp_mul(const(2), n), qp_add(qp_mul(const(2), n), const(1)),
              qp_mul(const(3), n), qp_mul(n, n),
              qp_add(qp_mul(n, n), const(1)), qp_add(qp_mul(n, n), n))
    return tuple(iota(i) for i in range(10)) + tuple(ModelElem(q) for q in nonstd)


def ident_elem() -> ModelElem:
    return ModelElem(QuasiPoly(1, ((0, 1),)))


def _canonicalize(model: Model, elems) -> tuple[ModelElem, ...]:
    out: list[ModelElem] = []
    for e in elems:
        v = standard_value(model, e)
        e = iota(v) if v is not None else e
        if not any(model.eq(e, seen) for seen in out):
            out.append(e)
    return tuple(out)


def st_assembly(model: Model, policy: CheckPolicy | None = None,
                elements: tuple[ModelElem, ...] | None = None,
                prefix_len: int = 24) -> ModelAssembly:
    """The element sample as an assembly: realizer sets carry the canonical
    description paired with a selector prefix, the arithmetic is tracked by
    structural code over descriptions, and the standardness split carries
    the branch realizer across the whole sample."""
    policy = policy or CheckPolicy(depth=4, window=2, fuel=200_000)
    elems = _canonicalize(model, elements or default_elements())
    model.ensure(prefix_len - 1)
    psi_code = coding.encode_seq(model.state.psi[:prefix_len])

    data = {e: qp_data(e.rep) for e in elems}
    variants: dict[ModelElem, set[int]] = {e: {elem_code(e.rep, psi_code)}
                                           for e in elems}

    def find(qp: QuasiPoly) -> ModelElem | None:
        probe = ModelElem(qp)
        for e in elems:
            if model.eq(e, probe):
                return e
        return None

    def register(e: ModelElem, desc: int):
        variants[e].add(coding.pair(desc, psi_code))

    std = {e: standard_value(model, e) is not None for e in elems}

    # successor: every element whose bump stays inside the sample; variant
    # registration repeats until stable since targets feed later sources
    succ_map: dict[ModelElem, ModelElem] = {}
    for e in elems:
        target = find(qp_add(e.rep, const(1)))
        if target is not None:
            succ_map[e] = target
    changed = True
    while changed:
        changed = False
        for e, target in succ_map.items():
            for d in tuple(variants[e]):
                code = coding.pair(mirror_succ(coding.unpair(d)[0]), psi_code)
                if code not in variants[target]:
                    variants[target].add(code)
                    changed = True

    # sums and products staying inside the sample, capped with unbounded
    # operands kept in the mix; zero factors excluded so scaling cannot
    # blank a row and flip the standardness branch
    def closed_pairs(op, skip_zero: bool):
        hits = []
        for a in elems:
            for b in elems:
                if skip_zero and 0 in (standard_value(model, a),
                                       standard_value(model, b)):
                    continue
                t = find(op(a.rep, b.rep))
                if t is not None:
                    hits.append((a, b, t))
        mixed = [abt for abt in hits if not (std[abt[0]] and std[abt[1]])]
        plain = [abt for abt in hits if std[abt[0]] and std[abt[1]]]
        return mixed[:12] + plain[:8]

    add_pairs = closed_pairs(qp_add, skip_zero=False)
    mul_pairs = closed_pairs(qp_mul, skip_zero=True)
    for pairs, mirror in ((add_pairs, mirror_add), (mul_pairs, mirror_mul)):
        for a, b, t in pairs:
            register(t, mirror(data[a], data[b]))

    iota_map = {n: e for n, e in ((standard_value(model, e), e)
                                  for e in elems) if n is not None}
    for n, e in iota_map.items():
        register(e, mirror_iota(n))

    for e in elems:
        for code in variants[e]:
            m, rows, _ = decode_elem_code(code)
            got = m == 1 and len(rows[0]) <= 1
            if got != std[e]:
                raise AssertionError(
                    f"description variant misreports standardness at {show_elem(e)}")

    asm = FiniteAssembly(
        "limit-sample", tuple(elems),
        tuple(Finite(frozenset(variants[e])) for e in elems))

    reports: list[tuple[str, TrackReport]] = []

    succ_src = FiniteAssembly(
        "succ-domain", tuple(succ_map),
        tuple(asm.realizer_set(e) for e in succ_map))
    reports.append(("succ", check_tracking(
        Morphism(succ_src, asm, succ_map.__getitem__, succ_tracker_code()),
        policy)))

    for name, pairs, term in (("add", add_pairs, ADD_DATA_T),
                              ("mul", mul_pairs, MUL_DATA_T)):
        src = FiniteAssembly(
            f"{name}-domain", tuple((a, b) for a, b, _ in pairs),
            tuple(Finite(frozenset({coding.pair(
                elem_code(a.rep, psi_code), elem_code(b.rep, psi_code))}))
                for a, b, _ in pairs))
        table = {(a, b): t for a, b, t in pairs}
        reports.append((name, check_tracking(
            Morphism(src, asm, table.__getitem__, binop_tracker_code(term)),
            policy)))

    reports.append(("iota", check_tracking(
        Morphism(NatAssembly(), asm, iota_map.__getitem__,
                 iota_tracker_code(psi_code)),
        policy, samples=len(iota_map))))

    st_sub = Subobject(lambda e: asm.realizer_set(e) if std[e] else _EMPTY)
    st_report, st_points = subobject_check(st_sub, asm, policy)

    env = Env(asm, relations=(
        ("St", lambda pts: asm.realizer_set(pts[0]) if std[pts[0]] else _EMPTY),))
    split = coding.pair(0, standard_split_code(_K0_CODE))
    verdict = jrealizes(split, STANDARD_SPLIT_FORMULA, env, policy)

    return ModelAssembly(asm, st_sub, tuple(st_points), st_report,
                         tuple(reports), split, verdict, prefix_len)


# ---------------------------------------------------------------------------
# element text for the command line: an integer embeds, anything else is a
# quasi-polynomial in the standard text form


def parse_elem(text: str) -> ModelElem:
    text = text.strip()
    if text.lstrip("-").isdigit():
        n = int(text)
        if n < 0:
            raise ValueError("elements embed naturals only")
        return iota(n)
    return ModelElem(parse_qp(text))

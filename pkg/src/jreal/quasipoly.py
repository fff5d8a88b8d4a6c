"""Quasi-polynomials: a decidable, composition-closed function family.

A quasi-polynomial picks one polynomial with nonnegative integer
coefficients per residue class of its modulus; the value at n comes from
the class of n.  The family is closed under pointwise sum, product, and
composition, and eventual comparison along any residue class is exact:
the difference of two member polynomials has a computable last sign
change.  That decidability is what lets the model construction downstream
run without any oracle.

Coefficient tuples are low-to-high and never carry trailing zeros; the
zero polynomial is the empty tuple.  Canonical form also minimizes the
modulus, so equality of canonical values is plain structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from math import gcd

# ---------------------------------------------------------------------------
# integer polynomials (private helpers; signed coefficients allowed)


def _trim(cs: tuple[int, ...]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return cs[:n]


def _peval(cs: tuple[int, ...], n: int) -> int:
    out = 0
    for c in reversed(cs):
        out = out * n + c
    return out


def _padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    return _trim(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))


def _psub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    width = max(len(a), len(b))
    out = tuple((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                for i in range(width))
    return _trim(out)


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(tuple(out))


def _pcompose(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    acc: tuple[int, ...] = ()
    for c in reversed(outer):
        acc = _padd(_pmul(acc, inner), (c,) if c else ())
    return acc


def _sign_tail(diff: tuple[int, ...]) -> int:
    """The sign the difference settles on for large arguments."""
    if not diff:
        return 0
    return 1 if diff[-1] > 0 else -1


def _last_violation(diff: tuple[int, ...], modulus: int, residue: int) -> int | None:
    """Largest class member where the sign differs from its tail, if any."""
    tail = _sign_tail(diff)
    if tail == 0:
        return None
    lead = abs(diff[-1])
    bound = 1 + max(abs(c) for c in diff) // lead + 1
    first = residue % modulus
    top = first + ((bound - first) // modulus + 1) * modulus
    for n in range(top, first - 1, -modulus):
        v = _peval(diff, n)
        s = 0 if v == 0 else (1 if v > 0 else -1)
        if s != tail:
            return n
    return None


# ---------------------------------------------------------------------------
# the family


@dataclass(frozen=True, slots=True)
class QuasiPoly:
    modulus: int
    residues: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.modulus < 1 or len(self.residues) != self.modulus:
            raise ValueError("one residue polynomial per class")
        if any(cs and cs[-1] == 0 for cs in self.residues):
            raise ValueError("coefficients must be trimmed")

    def value(self, n: int) -> int:
        return _peval(self.residues[n % self.modulus], n)

    def poly_at(self, n_class: int) -> tuple[int, ...]:
        return self.residues[n_class % self.modulus]

    @property
    def degree(self) -> int:
        return max((len(cs) - 1 for cs in self.residues if cs), default=0)

    @property
    def coeff_sum(self) -> int:
        return sum(sum(cs) for cs in self.residues)

    @property
    def weight(self) -> int:
        return self.modulus + self.degree + self.coeff_sum

    @property
    def bounded(self) -> bool:
        return all(len(cs) <= 1 for cs in self.residues)


def canon(modulus: int, residues) -> QuasiPoly:
    rs = tuple(_trim(tuple(cs)) for cs in residues)
    if len(rs) != modulus:
        raise ValueError("one residue polynomial per class")
    for d in range(1, modulus + 1):
        if modulus % d == 0 and all(rs[r] == rs[r % d] for r in range(modulus)):
            return QuasiPoly(d, rs[:d])
    raise AssertionError("the full modulus always qualifies")


def const(c: int) -> QuasiPoly:
    return QuasiPoly(1, ((c,) if c else (),))


def ident() -> QuasiPoly:
    return QuasiPoly(1, ((0, 1),))


def qp_add(f: QuasiPoly, g: QuasiPoly) -> QuasiPoly:
    m = _lcm(f.modulus, g.modulus)
    return canon(m, (_padd(f.poly_at(r), g.poly_at(r)) for r in range(m)))


def qp_mul(f: QuasiPoly, g: QuasiPoly) -> QuasiPoly:
    m = _lcm(f.modulus, g.modulus)
    return canon(m, (_pmul(f.poly_at(r), g.poly_at(r)) for r in range(m)))


def qp_compose(f: QuasiPoly, g: QuasiPoly) -> QuasiPoly:
    """f after g; the modulus lifts to make g's value class constant."""
    m = _lcm(f.modulus, g.modulus)
    rows = []
    for r in range(m):
        inner = g.poly_at(r)
        outer = f.poly_at(_peval(inner, r))
        rows.append(_pcompose(outer, inner))
    out = canon(m, rows)
    span = 3 * m
    bad = [n for n in range(span) if out.value(n) != f.value(g.value(n))]
    if bad:
        raise AssertionError(f"composition drifts at {bad[:3]}")
    return out


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# eventual comparison along residue classes


def compare_on_class(f: QuasiPoly, g: QuasiPoly, modulus: int,
                     residue: int) -> tuple[str, int]:
    """The settled relation of f to g on one residue class, with the least
    threshold past which it holds at every class member."""
    if modulus % _lcm(f.modulus, g.modulus) != 0:
        raise ValueError("class modulus must refine both operands")
    diff = _psub(f.poly_at(residue), g.poly_at(residue))
    tail = _sign_tail(diff)
    rel = {-1: "<", 0: "=", 1: ">"}[tail]
    last = _last_violation(diff, modulus, residue)
    return rel, 0 if last is None else last + 1


# ---------------------------------------------------------------------------
# definable sets of naturals


@dataclass(frozen=True, slots=True)
class DefinableSet:
    modulus: int
    residues: frozenset[int]
    threshold: int

    def __post_init__(self):
        if self.modulus < 1 or self.threshold < 0:
            raise ValueError("bad shape")
        if any(r < 0 or r >= self.modulus for r in self.residues):
            raise ValueError("residues out of range")

    def member(self, n: int) -> bool:
        return n >= self.threshold and n % self.modulus in self.residues

    @property
    def infinite(self) -> bool:
        return bool(self.residues)

    def least_above(self, x: int) -> int:
        if not self.residues:
            raise ValueError("empty set has no elements")
        start = max(self.threshold, x + 1)
        for n in range(start, start + self.modulus):
            if n % self.modulus in self.residues:
                return n
        raise AssertionError("a nonempty residue set meets every window")

    def subset_of(self, other: "DefinableSet") -> bool:
        m = _lcm(self.modulus, other.modulus)
        for r in range(m):
            if r % self.modulus not in self.residues:
                continue
            if r % other.modulus not in other.residues:
                return False
        # a member below the other threshold would be lost
        if self.residues and self.least_above(-1) < other.threshold:
            return False
        return True

    def elements(self, k: int) -> tuple[int, ...]:
        out = []
        n = self.threshold - 1
        while len(out) < k and self.residues:
            n = self.least_above(n)
            out.append(n)
        return tuple(out)


FULL_SET = DefinableSet(1, frozenset({0}), 0)


# ---------------------------------------------------------------------------
# the graded enumeration

# weight = modulus + degree + coefficient sum; within one weight, keys
# (modulus, degree, coefficient sum, residue tuple) sort lexicographically


def _polys_of(deg_cap: int, total: int):
    """All trimmed coefficient tuples with degree <= cap and given sum."""
    if total == 0:
        yield ()
        return
    for deg in range(deg_cap + 1):
        for cs in _coeff_tuples(deg + 1, total):
            if cs[-1] != 0:
                yield cs


def _coeff_tuples(length: int, total: int):
    if length == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _coeff_tuples(length - 1, total - head):
            yield (head,) + rest


def _splits(parts: int, total: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _splits(parts - 1, total - head):
            yield (head,) + rest


def of_weight(w: int) -> list[QuasiPoly]:
    out = []
    for m in range(1, w + 1):
        for d in range(w - m + 1):
            s = w - m - d
            for split in _splits(m, s):
                for rows in _rows_for(split, d):
                    if max((len(cs) - 1 for cs in rows if cs), default=0) != d:
                        continue
                    qp = QuasiPoly(m, rows)
                    if canon(m, rows) == qp:
                        out.append(qp)
    out.sort(key=lambda q: (q.modulus, q.degree, q.coeff_sum, q.residues))
    return out


def _rows_for(split: tuple[int, ...], deg_cap: int):
    if not split:
        yield ()
        return
    for head in _polys_of(deg_cap, split[0]):
        for rest in _rows_for(split[1:], deg_cap):
            yield (head,) + rest


def enumerate_qp(i: int) -> QuasiPoly:
    seen = 0
    for w in count(1):
        block = of_weight(w)
        if seen + len(block) > i:
            return block[i - seen]
        seen += len(block)


def index_of(qp: QuasiPoly) -> int:
    target = canon(qp.modulus, qp.residues)
    seen = 0
    for w in count(1):
        block = of_weight(w)
        if w == target.weight:
            return seen + block.index(target)
        seen += len(block)


# ---------------------------------------------------------------------------
# text format:  mod 2: 0 -> 1 + 2 n; 1 -> n^2


class QpSyntaxError(ValueError):
    pass


def show_qp(qp: QuasiPoly) -> str:
    rows = []
    for r, cs in enumerate(qp.residues):
        rows.append(f"{r} -> {_show_poly(cs)}")
    return f"mod {qp.modulus}: " + "; ".join(rows)


def _show_poly(cs: tuple[int, ...]) -> str:
    if not cs:
        return "0"
    bits = []
    for i, c in enumerate(cs):
        if c == 0:
            continue
        if i == 0:
            bits.append(str(c))
        else:
            var = "n" if i == 1 else f"n^{i}"
            bits.append(var if c == 1 else f"{c} {var}")
    return " + ".join(bits) if bits else "0"


def parse_qp(text: str) -> QuasiPoly:
    head, _, body = text.partition(":")
    head = head.strip()
    if not head.startswith("mod "):
        raise QpSyntaxError("expected 'mod <m>:'")
    try:
        m = int(head[4:])
    except ValueError:
        raise QpSyntaxError(f"bad modulus {head[4:]!r}") from None
    rows: dict[int, tuple[int, ...]] = {}
    for chunk in body.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        r_txt, arrow, poly_txt = chunk.partition("->")
        if not arrow:
            raise QpSyntaxError(f"missing '->' in {chunk!r}")
        try:
            r = int(r_txt)
        except ValueError:
            raise QpSyntaxError(f"bad residue {r_txt.strip()!r}") from None
        if not 0 <= r < m:
            raise QpSyntaxError(f"residue {r} outside modulus {m}")
        rows[r] = _parse_poly(poly_txt.strip())
    missing = [r for r in range(m) if r not in rows]
    if missing:
        raise QpSyntaxError(f"no polynomial for residues {missing}")
    return canon(m, [rows[r] for r in range(m)])


def _parse_poly(text: str) -> tuple[int, ...]:
    coeffs: dict[int, int] = {}
    for part in text.split("+"):
        part = part.strip()
        if not part:
            raise QpSyntaxError("empty term")
        if "n" not in part:
            try:
                coeffs[0] = coeffs.get(0, 0) + int(part)
            except ValueError:
                raise QpSyntaxError(f"bad constant {part!r}") from None
            continue
        c_txt, _, pow_txt = part.partition("n")
        c = 1 if not c_txt.strip() else _int_or_die(c_txt.strip())
        p = 1
        if pow_txt.strip():
            if not pow_txt.strip().startswith("^"):
                raise QpSyntaxError(f"bad power in {part!r}")
            p = _int_or_die(pow_txt.strip()[1:])
        coeffs[p] = coeffs.get(p, 0) + c
    width = max(coeffs) + 1 if coeffs else 0
    return _trim(tuple(coeffs.get(i, 0) for i in range(width)))


def _int_or_die(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise QpSyntaxError(f"bad number {s!r}") from None

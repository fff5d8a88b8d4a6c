"""Finite application doctrines: a desk-sized laboratory for the closure laws.

A doctrine is a carrier {0..N-1} with partial application and pairing tables.
Subsets are bitmasks, operators on subsets are full tables checked monotone
at construction, and every law is witnessed by a concrete element or reported
absent.  The least closed operator above a monotone map is computed per set
by iterating the two generating rules and cross-checked against the big
intersection it is supposed to equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

MAX_SIZE = 16


class UnsuitableDoctrine(ValueError):
    """The pairing table lacks an entry the closure construction requires."""


@dataclass(frozen=True, slots=True)
class Doctrine:
    size: int
    app: tuple[int, ...]   # row-major e*size+x, -1 for undefined
    pair: tuple[int, ...]  # row-major x*size+y, -1 for undefined

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def app_at(self, e: int, x: int) -> int | None:
        v = self.app[e * self.size + x]
        return None if v < 0 else v

    def pair_at(self, x: int, y: int) -> int | None:
        v = self.pair[x * self.size + y]
        return None if v < 0 else v


def make_doctrine(size: int,
                  app_cells: dict[tuple[int, int], int],
                  pair_cells: dict[tuple[int, int], int]) -> Doctrine:
    if not (1 <= size <= MAX_SIZE):
        raise ValueError(f"carrier size {size} out of range")
    app = [-1] * (size * size)
    pair = [-1] * (size * size)
    for (e, x), v in app_cells.items():
        if not (0 <= e < size and 0 <= x < size and 0 <= v < size):
            raise ValueError(f"app cell ({e},{x})={v} out of range")
        app[e * size + x] = v
    seen: dict[int, tuple[int, int]] = {}
    for (x, y), v in pair_cells.items():
        if not (0 <= x < size and 0 <= y < size and 0 <= v < size):
            raise ValueError(f"pair cell ({x},{y})={v} out of range")
        if v in seen and seen[v] != (x, y):
            raise ValueError(f"pairing not injective: {v} hit twice")
        seen[v] = (x, y)
        pair[x * size + y] = v
    return Doctrine(size, tuple(app), tuple(pair))


def bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# monotone operators


@dataclass(frozen=True, slots=True)
class MonoOp:
    size: int
    table: tuple[int, ...]  # indexed by subset mask

    def __getitem__(self, mask: int) -> int:
        return self.table[mask]


def mono_op(size: int, table: tuple[int, ...]) -> MonoOp:
    """Wrap a table, rejecting non-monotone ones via the covers of the lattice."""
    if len(table) != 1 << size:
        raise ValueError("table must cover every subset")
    for mask in range(1 << size):
        for x in range(size):
            if not mask >> x & 1:
                bigger = mask | 1 << x
                if table[mask] & ~table[bigger]:
                    raise ValueError(f"not monotone between {mask} and {bigger}")
    return MonoOp(size, tuple(table))


def identity_op(size: int) -> MonoOp:
    return MonoOp(size, tuple(range(1 << size)))


# ---------------------------------------------------------------------------
# arrow and wedge with caching


class Table:
    """Cached arrow/wedge computations over one doctrine."""

    def __init__(self, d: Doctrine):
        self.d = d
        self._arrow: dict[tuple[int, int], int] = {}
        self._wedge: dict[tuple[int, int], int] = {}

    def arrow(self, A: int, B: int) -> int:
        key = (A, B)
        got = self._arrow.get(key)
        if got is not None:
            return got
        d = self.d
        mask = 0
        for e in range(d.size):
            row = d.app[e * d.size:(e + 1) * d.size]
            ok = True
            for a in bits(A):
                t = row[a]
                if t < 0 or not B >> t & 1:
                    ok = False
                    break
            if ok:
                mask |= 1 << e
        self._arrow[key] = mask
        return mask

    def wedge(self, A: int, B: int) -> int:
        key = (A, B)
        got = self._wedge.get(key)
        if got is not None:
            return got
        d = self.d
        mask = 0
        for a in bits(A):
            row = d.pair[a * d.size:(a + 1) * d.size]
            for b in bits(B):
                p = row[b]
                if p >= 0:
                    mask |= 1 << p
        self._wedge[key] = mask
        return mask


def arrow(d: Doctrine, A: int, B: int) -> int:
    return Table(d).arrow(A, B)


def wedge(d: Doctrine, A: int, B: int) -> int:
    return Table(d).wedge(A, B)


# ---------------------------------------------------------------------------
# witnesses and laws


@dataclass(frozen=True, slots=True)
class Witness:
    element: int
    law: str


def preorder_witness(d: Doctrine, F: MonoOp, G: MonoOp) -> Witness | None:
    """An element sending every F-stage into the matching G-stage, if any."""
    t = Table(d)
    mask = d.full
    for A in range(1 << d.size):
        mask &= t.arrow(F[A], G[A])
        if not mask:
            return None
    return Witness((mask & -mask).bit_length() - 1, "preorder")


@dataclass(frozen=True, slots=True)
class LawReport:
    e1: Witness | None
    e2: Witness | None
    e3: Witness | None
    e4: Witness | None
    e4_derived: Witness | None
    e4_derivation_note: str

    @property
    def operator_is_local(self) -> bool:
        return None not in (self.e1, self.e2, self.e3)


def _least(mask: int, law: str) -> Witness | None:
    if not mask:
        return None
    return Witness((mask & -mask).bit_length() - 1, law)


def _law_masks(d: Doctrine, J: MonoOp, t: Table) -> tuple[int, int, int, int]:
    n = 1 << d.size
    e1 = e4 = d.full
    for A in range(n):
        ja = J[A]
        for B in range(n):
            if e1:
                e1 &= t.arrow(t.arrow(A, B), t.arrow(ja, J[B]))
            if e4:
                e4 &= t.arrow(t.wedge(ja, J[B]), J[t.wedge(A, B)])
            if not e1 and not e4:
                break
        if not e1 and not e4:
            break
    e2 = e3 = d.full
    for A in range(n):
        e2 &= t.arrow(A, J[A])
        e3 &= t.arrow(J[J[A]], J[A])
        if not e2 and not e3:
            break
    return e1, e2, e3, e4


def local_laws(d: Doctrine, J: MonoOp) -> LawReport:
    t = Table(d)
    m1, m2, m3, m4 = _law_masks(d, J, t)
    derived, note = derive_e4(d, J, _least(m1, "E1"), _least(m3, "E3"), t, m4)
    return LawReport(
        _least(m1, "E1"), _least(m2, "E2"), _least(m3, "E3"), _least(m4, "E4"),
        derived, note,
    )


def derive_e4(d: Doctrine, J: MonoOp,
              w1: Witness | None, w3: Witness | None,
              t: Table | None = None, e4_mask: int | None = None) -> tuple[Witness | None, str]:
    """Build a pair-merging witness out of the push and flatten witnesses.

    The construction mirrors how the law follows from the other three: section
    rows for the pairing, pushed through the first witness, then a row that
    runs the composite and one flattening.  Every stage is a table search;
    the found element is verified against the law's set before it is reported.
    """
    if w1 is None or w3 is None:
        return None, "underivable: missing ingredient witnesses"
    t = t or Table(d)
    if e4_mask is None:
        e4_mask = d.full
        for A in range(1 << d.size):
            for B in range(1 << d.size):
                e4_mask &= t.arrow(t.wedge(J[A], J[B]), J[t.wedge(A, B)])
                if not e4_mask:
                    break
            if not e4_mask:
                break
    size = d.size
    firsts = sorted({x for x in range(size) for y in range(size) if d.pair_at(x, y) is not None})
    seconds = sorted({y for x in range(size) for y in range(size) if d.pair_at(x, y) is not None})
    if not firsts:
        return None, "underivable: pairing table is empty"

    sections: dict[int, int] = {}
    for u in firsts:
        for e in range(size):
            if all(
                d.pair_at(u, y) is None or d.app_at(e, y) == d.pair_at(u, y)
                for y in range(size)
            ):
                sections[u] = e
                break
        else:
            return None, f"underivable: no section row for first component {u}"

    pushed: dict[int, int] = {}
    for u, p_u in sections.items():
        q = d.app_at(w1.element, p_u)
        if q is None:
            return None, f"underivable: push witness undefined on section {p_u}"
        pushed[u] = q

    stitched: dict[int, int] = {}
    for v in seconds:
        want = {}
        for u in firsts:
            r = d.app_at(pushed[u], v)
            if r is None:
                return None, f"underivable: pushed section {pushed[u]} undefined at {v}"
            want[u] = r
        for e in range(size):
            if all(d.app_at(e, u) == r for u, r in want.items()):
                stitched[v] = e
                break
        else:
            return None, f"underivable: no row stitching component {v}"

    combined: dict[int, int] = {}
    for u in firsts:
        for v in seconds:
            w = d.pair_at(u, v)
            if w is None:
                continue
            s1 = d.app_at(w1.element, stitched[v])
            if s1 is None:
                return None, "underivable: push witness undefined on a stitched row"
            s2 = d.app_at(s1, u)
            if s2 is None:
                return None, "underivable: pushed stitch undefined on a first component"
            s3 = d.app_at(w3.element, s2)
            if s3 is None:
                return None, "underivable: flatten witness undefined on the composite"
            combined[w] = s3
    for e in range(size):
        if all(d.app_at(e, w) == out for w, out in combined.items()):
            if e4_mask >> e & 1:
                return Witness(e, "E4"), "derived and verified"
            return None, f"underivable: candidate {e} fails the law set"
    return None, "underivable: no row realizes the composite"


# ---------------------------------------------------------------------------
# the least closed operator


def _require_bottom(d: Doctrine, A: int) -> int:
    """Seed stage {0} wedge A; every entry is required, not optional."""
    out = 0
    for a in bits(A):
        p = d.pair_at(0, a)
        if p is None:
            raise UnsuitableDoctrine(f"pair(0,{a}) undefined but required by the seed stage")
        out |= 1 << p
    return out


def lfp_local(d: Doctrine, F: MonoOp) -> MonoOp:
    """Per-set iteration of the two closure rules to stabilization."""
    t = Table(d)
    table = []
    for A in range(1 << d.size):
        B = _require_bottom(d, A)
        while True:
            nxt = B | t.wedge(2, F[B])  # {1} wedge F(stage), defined pairs only
            if nxt == B:
                break
            B = nxt
        table.append(B)
    return mono_op(d.size, tuple(table))


def lfp_by_intersection(d: Doctrine, F: MonoOp, A: int) -> int:
    """The same operator as the meet of all closed supersets; for cross-checks."""
    t = Table(d)
    seed = _require_bottom(d, A)
    out = d.full
    for B in range(1 << d.size):
        if seed & ~B:
            continue
        if t.wedge(2, F[B]) & ~B:
            continue
        out &= B
    return out


def pitts_f_finite(d: Doctrine) -> MonoOp:
    """A maps to the union over n of (up-set of n) arrow A."""
    t = Table(d)
    table = []
    for A in range(1 << d.size):
        out = 0
        for n in range(d.size):
            up = (d.full >> n) << n
            out |= t.arrow(up, A)
        table.append(out)
    return mono_op(d.size, tuple(table))


# ---------------------------------------------------------------------------
# uniformity of the equality object


@dataclass(frozen=True, slots=True)
class UniformityReport:
    element: int | None      # the paired witness, when one exists
    paired_from: int | None  # the element whose self-pairing it is
    checked: int
    failures: tuple[int, ...]  # set masks where membership failed

    @property
    def verified(self) -> bool:
        return self.element is not None and not self.failures


def uniformity_finite(d: Doctrine, J: MonoOp) -> UniformityReport:
    """One element self-paired into the equality set of every subset."""
    t = Table(d)
    e2 = d.full
    for A in range(1 << d.size):
        e2 &= t.arrow(A, J[A])
        if not e2:
            break
    for a in bits(e2):
        x = d.pair_at(a, a)
        if x is None:
            continue
        failures = []
        for A in range(1 << d.size):
            side = t.arrow(A, J[A])
            if not (side >> a & 1 and t.wedge(side, side) >> x & 1):
                failures.append(A)
        return UniformityReport(x, a, 1 << d.size, tuple(failures))
    return UniformityReport(None, None, 1 << d.size, ())


# ---------------------------------------------------------------------------
# shipped doctrines and generators


def _seeded_cells(size: int) -> tuple[dict, dict]:
    app: dict[tuple[int, int], int] = {}
    pair: dict[tuple[int, int], int] = {}
    for x in range(size):
        pair[0, x] = x          # bottom-stage pairing is total and injective
        app[0, x] = x           # row 0: identity
        app[x, 0] = x           # column 0: self
    return app, pair


def shipped_doctrine(size: int) -> Doctrine:
    """Identity row and column, successor row, near-constant upper rows."""
    app, pair = _seeded_cells(size)
    for x in range(1, size):
        app[1, x] = (x + 1) % size
        for e in range(2, size):
            app[e, x] = (e - 2) % size
    return make_doctrine(size, app, pair)


def shipped_d4() -> Doctrine:
    return shipped_doctrine(4)


def shipped_d8() -> Doctrine:
    return shipped_doctrine(8)


def random_doctrine(rng: Random, size: int) -> Doctrine:
    """Seeded like the shipped doctrines, free cells filled at random."""
    app, pair = _seeded_cells(size)
    for e in range(1, size):
        for x in range(1, size):
            if rng.random() < 0.7:
                app[e, x] = rng.randrange(size)
    return make_doctrine(size, app, pair)


def candidate_ops(d: Doctrine) -> list[tuple[str, MonoOp]]:
    """The shipped enumeration of operator tables law searches range over."""
    n = 1 << d.size
    t = Table(d)
    out: list[tuple[str, MonoOp]] = [
        ("identity", identity_op(d.size)),
        ("top", MonoOp(d.size, tuple(d.full for _ in range(n)))),
        ("chi", MonoOp(d.size, tuple(0 if A == 0 else d.full for A in range(n)))),
    ]
    for C in range(n):
        out.append((f"join_{C}", MonoOp(d.size, tuple(A | C for A in range(n)))))
    for C in range(min(n, 16)):
        out.append((f"arrow_{C}", MonoOp(d.size, tuple(t.arrow(C, A) for A in range(n)))))
    return out


# ---------------------------------------------------------------------------
# file format
#
#   doctrine 8
#   app 0 0 = 0
#   pair 0 3 = 3


class DoctrineSyntaxError(ValueError):
    pass


def show_doctrine(d: Doctrine) -> str:
    lines = [f"doctrine {d.size}"]
    for e in range(d.size):
        for x in range(d.size):
            v = d.app_at(e, x)
            if v is not None:
                lines.append(f"app {e} {x} = {v}")
    for x in range(d.size):
        for y in range(d.size):
            v = d.pair_at(x, y)
            if v is not None:
                lines.append(f"pair {x} {y} = {v}")
    return "\n".join(lines) + "\n"


def parse_doctrine(text: str) -> Doctrine:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("doctrine"):
        raise DoctrineSyntaxError("missing doctrine header")
    try:
        size = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise DoctrineSyntaxError("bad doctrine header") from None
    app: dict[tuple[int, int], int] = {}
    pair: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        fields = ln.split()
        if len(fields) != 5 or fields[3] != "=":
            raise DoctrineSyntaxError(f"bad line {ln!r}")
        kind, a, b, _, v = fields
        try:
            cell = (int(a), int(b))
            value = int(v)
        except ValueError:
            raise DoctrineSyntaxError(f"bad numbers in {ln!r}") from None
        if kind == "app":
            app[cell] = value
        elif kind == "pair":
            pair[cell] = value
        else:
            raise DoctrineSyntaxError(f"unknown table {kind!r}")
    try:
        return make_doctrine(size, app, pair)
    except ValueError as exc:
        raise DoctrineSyntaxError(str(exc)) from None

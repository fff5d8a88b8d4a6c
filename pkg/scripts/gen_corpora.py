"""Write the small command-line corpora: realizability cases, transfer
cases, and two assembly fixtures.

The realize corpus exercises the builder on true bounded sentences plus a
couple of hand-picked failures; the transfer corpus covers both the exact
quantifier-free path and the sampled quantified path.
"""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

REALIZE_CASES = {
    "conj": "formula: 0 = 0 /\\ 1 < 2\n",
    "bounded_all": "formula: forall x < 4. x < 9\n",
    "imp": "formula: 1 < 0 -> 0 = 1\n",
    "nested": "formula: forall x < 3. exists y < 4. x < y\n",
    "sigma1": "formula: exists x. x = S S 0\n",
    "refuted_zero": "formula: 0 = 0 /\\ 0 = 0\ne: 0\nexpect: refuted\n",
    "refuted_false": "formula: 0 = S 0\ne: 5\nexpect: refuted\n",
}

TRANSFER_CASES = {
    "qf_const": "formula: x + 1 = 4\nargs: x=3\n",
    "qf_square": "formula: x * x < x * x + 1\nargs: x=mod 1: 0 -> n\n",
    "qf_mixed": "formula: x < y\nargs: x=2 | y=mod 1: 0 -> n\n",
    "quant_succ": "formula: forall x. x < S x\n",
    "quant_pair": "formula: forall x. exists y. x < y\n",
}

PAIR_ASM = """\
point a realizers {3}
point b realizers {4,5}
point c realizers {6}
"""

TWO_ASM = """\
point p realizers {1}
point q realizers {2}
"""


def write_corpus(dirname: str, cases: dict[str, str]) -> None:
    out = ROOT / "corpus" / dirname
    out.mkdir(parents=True, exist_ok=True)
    for name, body in sorted(cases.items()):
        (out / f"{name}.case").write_text(body)
    print(f"wrote {len(cases)} cases under {out}")


def main() -> None:
    write_corpus("realize", REALIZE_CASES)
    write_corpus("transfer", TRANSFER_CASES)
    fixtures = ROOT / "corpus" / "asm"
    fixtures.mkdir(parents=True, exist_ok=True)
    (fixtures / "pair.asm").write_text(PAIR_ASM)
    (fixtures / "two.asm").write_text(TWO_ASM)
    print(f"wrote 2 assemblies under {fixtures}")


if __name__ == "__main__":
    main()

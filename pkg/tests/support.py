"""Builders for random certified closure members, shared across test modules.

Chains are grown bottom-up: a 0-tagged base member, then lift steps whose
tail codes either repeat one member or switch between two at a window split,
so tail certificates genuinely differ per sample point.
"""

import random

from jreal import coding, prog
from jreal.bracket import lam
from jreal.certs import Base, Cert, CheckPolicy, Lift
from jreal.terms import App, K, Num, Var, ap, encode_term


def const_code(x: int) -> int:
    return encode_term(App(K, Num(x)))


def lift_step(rng, pool, policy: CheckPolicy):
    """One lift over members drawn from the pool; returns (value, cert)."""
    x1, c1 = rng.choice(pool)
    x2, c2 = rng.choice(pool)
    threshold = rng.randrange(0, 3)
    if rng.random() < 0.4:
        e = const_code(x1)
        tails = tuple((m, c1) for m in policy.window_points(threshold))
    else:
        split = threshold + rng.randrange(0, policy.window)
        e = encode_term(
            lam("m", prog.ite(ap(prog.LT01, Var("m"), Num(split)), Num(x1), Num(x2)))
        )
        tails = tuple(
            (m, c1 if m < split else c2) for m in policy.window_points(threshold)
        )
    return coding.pair(1, e), Lift(threshold, tails)


def chain(rng: random.Random, a: int, depth: int, policy: CheckPolicy) -> tuple[int, Cert]:
    """A certified member of the closure of {a}, with `depth` lift layers."""
    pool = [(coding.pair(0, a), Base(a))]
    for _ in range(depth):
        pool.append(lift_step(rng, pool, policy))
    return pool[-1]


def nested_chain(rng: random.Random, a: int, inner_depth: int, outer_depth: int,
                 policy: CheckPolicy) -> tuple[int, Cert]:
    """A certified member of the double closure of {a}."""
    x, cert = chain(rng, a, inner_depth, policy)
    pool = [(coding.pair(0, x), Base(x, cert))]
    for _ in range(outer_depth):
        pool.append(lift_step(rng, pool, policy))
    return pool[-1]

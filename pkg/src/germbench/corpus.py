"""Named semigroups and seeded random actions used by the CLI and the test corpus.

Random actions are glued from orbits of a few actions every inverse
semigroup carries (θ on the spectrum, the Munn action on nonzero idempotents,
the Wagner–Preston action on nonzero elements, and for I(n) the natural
action), then points are shuffled. Any disjoint union of invariant pieces of
actions is again an action, so every output is valid by construction; the
tests still run the validator on each one.
"""

from __future__ import annotations

import random
import re
from typing import Iterator

from .action import Action, disjoint_union, munn_action, natural_action, orbits, preston_action, relabel, restrict
from .semigroup import (
    InverseSemigroup,
    build_from_table,
    cyclic_group,
    double_zero_example,
    adjoin_zero,
    symmetric_inverse_monoid,
)
from .spectrum import canonical_action


def brandt_b2() -> InverseSemigroup:
    """The 5-element Brandt semigroup: the rank ≤ 1 part of I(2)."""
    I2 = symmetric_inverse_monoid(2)
    keep = [s for s in I2.elements if len(I2.payload[s]) <= 1]
    pos = {s: i for i, s in enumerate(keep)}
    table = [[pos[I2.mul(a, b)] for b in keep] for a in keep]
    labels = [I2.label(s) for s in keep]
    return build_from_table(labels, table, I2.zero_label, payload=[I2.payload[s] for s in keep])


def chain(k: int) -> InverseSemigroup:
    """The chain 0 < e1 < ... < ek as a semilattice (ei·ej = e_min(i,j))."""
    labels = ["0"] + [f"e{i}" for i in range(1, k + 1)]
    table = [[min(i, j) for j in range(k + 1)] for i in range(k + 1)]
    return build_from_table(labels, table, "0")


_NAMED = {
    "I1": lambda: symmetric_inverse_monoid(1),
    "I2": lambda: symmetric_inverse_monoid(2),
    "I3": lambda: symmetric_inverse_monoid(3),
    "I4": lambda: symmetric_inverse_monoid(4),
    "B2": brandt_b2,
    "chain3": lambda: chain(3),
}


def named_semigroup(name: str) -> InverseSemigroup:
    """Builtin semigroups: I1..I4, B2, chain3, Zn-zero (G⁰), double-zero-Zn."""
    if name in _NAMED:
        return _NAMED[name]()
    m = re.fullmatch(r"double-zero-Z(\d+)", name)
    if m:
        return double_zero_example(cyclic_group(int(m.group(1))))
    m = re.fullmatch(r"Z(\d+)-zero", name)
    if m:
        return adjoin_zero(cyclic_group(int(m.group(1))))
    raise KeyError(f"no builtin semigroup named {name!r}")


def base_actions(S: InverseSemigroup) -> list[Action]:
    out = [canonical_action(S), munn_action(S), preston_action(S)]
    if S.payload is not None:
        out.append(natural_action(S))
    return out


def orbit_blocks(S: InverseSemigroup, max_points: int) -> list[Action]:
    blocks = []
    for A in base_actions(S):
        for orb in orbits(A):
            if len(orb) <= max_points:
                blocks.append(restrict(A, orb))
    return blocks


def random_action(S: InverseSemigroup, rng: random.Random, max_points: int = 5, blocks=None) -> Action:
    blocks = blocks if blocks is not None else orbit_blocks(S, max_points)
    if not blocks:
        raise ValueError(f"no orbit of at most {max_points} points to build from")
    A = rng.choice(blocks)
    while True:
        fits = [b for b in blocks if len(b) + len(A) <= max_points]
        if not fits or rng.random() < 0.4:
            break
        A = disjoint_union(A, rng.choice(fits))
    perm = list(range(len(A)))
    rng.shuffle(perm)
    return relabel(A, perm, [f"p{i}" for i in range(len(A))])


CORPUS_SEMIGROUPS = ("I2", "I3", "double-zero-Z2", "double-zero-Z3", "double-zero-Z4", "double-zero-Z5")


def sample_corpus(seed: int = 0, per_semigroup: int = 20, max_points: int = 5,
                  names=CORPUS_SEMIGROUPS) -> Iterator[tuple[str, Action]]:
    """Canonical action plus ``per_semigroup`` random actions for each name."""
    rng = random.Random(seed)
    for name in names:
        S = named_semigroup(name)
        yield f"{name}/canonical", canonical_action(S)
        blocks = orbit_blocks(S, max_points)
        for i in range(per_semigroup):
            yield f"{name}/random{i}", random_action(S, rng, max_points, blocks)

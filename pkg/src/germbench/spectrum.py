"""Filters on the idempotent semilattice, the spectrum, and the canonical action θ.

For finite E every filter is the up-set of the product of its members, so the
spectrum is {↑e : e a nonzero idempotent}. The product topology on {0,1}^E is
discrete when E is finite; the closure of the ultrafilters is therefore the
set of ultrafilters itself, and that is what :func:`tight_spectrum` returns.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .action import Action, restrict
from .errors import DomainViolation, SizeGuard
from .partial import PartialBijection
from .semigroup import InverseSemigroup

Filter = frozenset  # frozenset of idempotent indices

BRUTE_FORCE_MAX_E = 16


def is_filter(S: InverseSemigroup, members: Iterable[int]) -> bool:
    xi = frozenset(members)
    if not xi or not xi <= set(S.idempotents):
        return False
    if S.zero is not None and S.zero in xi:
        return False
    for e, f in itertools.product(xi, repeat=2):
        if S.mul(e, f) not in xi:
            return False
    for e in xi:
        for f in S.idempotents:
            if S.leq(e, f) and f not in xi:
                return False
    return True


def up_set(S: InverseSemigroup, e: int) -> Filter:
    return frozenset(f for f in S.idempotents if S.leq(e, f))


def sort_key(xi: Filter) -> tuple[int, ...]:
    return tuple(sorted(xi))


def filter_labels(S: InverseSemigroup, xi: Filter) -> list[str]:
    return [S.label(e) for e in sorted(xi)]


def filter_label(S: InverseSemigroup, xi: Filter) -> str:
    return "{" + ";".join(filter_labels(S, xi)) + "}"


@dataclass(frozen=True, eq=False)
class Spectrum:
    semigroup: InverseSemigroup
    filters: tuple[Filter, ...]

    def __len__(self):
        return len(self.filters)

    def __iter__(self) -> Iterator[Filter]:
        return iter(self.filters)

    def __contains__(self, xi) -> bool:
        return frozenset(xi) in self._index

    @cached_property
    def _index(self) -> dict[Filter, int]:
        return {xi: i for i, xi in enumerate(self.filters)}

    def index(self, xi) -> int:
        return self._index[frozenset(xi)]

    def labels(self) -> list[str]:
        return [filter_label(self.semigroup, xi) for xi in self.filters]


def filters_by_subsets(S: InverseSemigroup, *, max_e: int = BRUTE_FORCE_MAX_E) -> list[Filter]:
    """Every filter, found by testing each subset of E against the axioms."""
    E = S.idempotents
    if len(E) > max_e:
        raise SizeGuard(f"|E| = {len(E)} is too large for subset enumeration (guard {max_e})")
    found = []
    for mask in range(1, 1 << len(E)):
        xi = frozenset(E[i] for i in range(len(E)) if mask >> i & 1)
        if is_filter(S, xi):
            found.append(xi)
    return sorted(found, key=sort_key)


def enumerate_filters(S: InverseSemigroup, *, crosscheck: bool = False) -> Spectrum:
    filters = sorted({up_set(S, e) for e in S.nonzero_idempotents}, key=sort_key)
    if crosscheck and len(S.idempotents) <= BRUTE_FORCE_MAX_E:
        brute = filters_by_subsets(S)
        if brute != filters:
            raise AssertionError("principal up-sets disagree with subset enumeration")
    return Spectrum(S, tuple(filters))


def basis_set(spec: Spectrum, X: Iterable[int] = (), Y: Iterable[int] = ()) -> tuple[Filter, ...]:
    """U(X, Y): filters containing all of X and none of Y."""
    X, Y = set(X), set(Y)
    return tuple(xi for xi in spec if X <= xi and not (Y & xi))


def ultrafilters(S: InverseSemigroup, spec: Spectrum | None = None) -> tuple[Filter, ...]:
    spec = spec or enumerate_filters(S)
    return tuple(xi for xi in spec if not any(xi < other for other in spec))


def tight_spectrum(S: InverseSemigroup, spec: Spectrum | None = None) -> tuple[Filter, ...]:
    # closure in a finite discrete space adds nothing
    return ultrafilters(S, spec)


def theta_apply(S: InverseSemigroup, s: int, xi: Iterable[int]) -> Filter:
    """θ_s(ξ) = {e ∈ E : s f s* ⩽ e for some f ∈ ξ}, defined when s*s ∈ ξ."""
    xi = frozenset(xi)
    if S.source_idempotent(s) not in xi:
        raise DomainViolation(f"s*s for s = {S.label(s)!r} is not in the filter")
    conj = {S.prod(s, f, S.inv[s]) for f in xi}
    return frozenset(e for e in S.idempotents if any(S.leq(c, e) for c in conj))


def canonical_action(S: InverseSemigroup, spec: Spectrum | None = None) -> Action:
    """θ acting on the spectrum; θ_s is defined on U({s*s}, ∅)."""
    spec = spec or enumerate_filters(S)
    maps = []
    for s in S.elements:
        src = S.source_idempotent(s)
        maps.append(
            PartialBijection(
                tuple((i, spec.index(theta_apply(S, s, xi))) for i, xi in enumerate(spec) if src in xi)
            )
        )
    return Action(S, tuple(spec.labels()), tuple(maps))


def tight_action(S: InverseSemigroup, spec: Spectrum | None = None) -> Action:
    """θ restricted to the tight spectrum."""
    spec = spec or enumerate_filters(S)
    tight = set(tight_spectrum(S, spec))
    return restrict(canonical_action(S, spec), [i for i, xi in enumerate(spec) if xi in tight])

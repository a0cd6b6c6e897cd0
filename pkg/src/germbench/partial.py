"""Partial bijections of a finite point set, i.e. elements of I(X)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping


@dataclass(frozen=True)
class PartialBijection:
    """An injective map between two subsets of a finite space.

    Points are plain ints (indices into whatever space the caller has in mind).
    ``pairs`` is kept sorted so that equal maps compare and hash equal.
    """

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(x), int(y)) for x, y in self.pairs))
        xs = [x for x, _ in pairs]
        ys = [y for _, y in pairs]
        if len(set(xs)) != len(xs):
            raise ValueError(f"not a function: repeated domain point in {pairs}")
        if len(set(ys)) != len(ys):
            raise ValueError(f"not injective: repeated image point in {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> PartialBijection:
        return cls(tuple(mapping.items()))

    @classmethod
    def identity(cls, points: Iterable[int]) -> PartialBijection:
        return cls(tuple((x, x) for x in points))

    @cached_property
    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(x for x, _ in self.pairs)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(y for _, y in self.pairs)

    def __call__(self, x: int) -> int:
        return self.as_dict[x]

    def __contains__(self, x: int) -> bool:
        return x in self.as_dict

    def __len__(self) -> int:
        return len(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def get(self, x, default=None):
        return self.as_dict.get(x, default)

    def inverse(self) -> PartialBijection:
        return PartialBijection(tuple((y, x) for x, y in self.pairs))

    def is_partial_identity(self) -> bool:
        return all(x == y for x, y in self.pairs)

    def restrict(self, points: Iterable[int]) -> PartialBijection:
        keep = set(points)
        return PartialBijection(tuple(p for p in self.pairs if p[0] in keep))

    def __matmul__(self, other: PartialBijection) -> PartialBijection:
        return compose_partial(self, other)

    def __str__(self):
        if not self.pairs:
            return "{}"
        return "{" + ", ".join(f"{x}->{y}" for x, y in self.pairs) + "}"


EMPTY = PartialBijection()


def compose_partial(f: PartialBijection, g: PartialBijection) -> PartialBijection:
    """f∘g on the largest domain possible: g first, then f.

    The domain is g⁻¹(dom f ∩ img g); when img g misses dom f the result is
    the empty map (the zero of I(X)).
    """
    fd = f.as_dict
    return PartialBijection(tuple((x, fd[y]) for x, y in g.pairs if y in fd))

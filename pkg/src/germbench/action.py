"""Actions of a finite inverse semigroup on a finite set, and groupoids of germs.

On a finite discrete space the continuity and open-domain requirements of an
action are automatic, so an action is just a homomorphism S -> I(X) that
sends zero to the empty map and whose domains cover X.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import DomainViolation, FormatError, InvalidAction
from .groupoid import FiniteGroupoid
from .partial import EMPTY, PartialBijection, compose_partial
from .semigroup import InverseSemigroup, read_semigroup

__all__ = [
    "Action",
    "ActionReport",
    "GermGroupoid",
    "basis_arrow_set",
    "build_germ_groupoid",
    "compose_partial",
    "disjoint_union",
    "format_action",
    "germ_equal",
    "orbits",
    "parse_action",
    "read_action",
    "restrict",
    "validate_action",
]


@dataclass(frozen=True, eq=False)
class Action:
    """α: S -> I(X), stored as one partial bijection per element index."""

    semigroup: InverseSemigroup
    points: tuple[str, ...]
    maps: tuple[PartialBijection, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        object.__setattr__(self, "maps", tuple(self.maps))

    def __len__(self):
        return len(self.points)

    def __call__(self, s: int, x: int) -> int:
        return self.maps[s](x)

    @cached_property
    def _point_index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def point(self, label: str) -> int:
        return self._point_index[label]

    def domain(self, s: int) -> frozenset[int]:
        """dom α_s, which equals D_{s*s}."""
        return self.maps[s].domain

    def in_domain(self, s: int, x: int) -> bool:
        return x in self.maps[s]

    def defined_at(self, x: int) -> list[int]:
        """{s : x ∈ D_{s*s}} in index order."""
        return [s for s in self.semigroup.elements if x in self.maps[s]]

    def idempotents_at(self, x: int) -> list[int]:
        return [e for e in self.semigroup.idempotents if x in self.maps[e]]

    @cached_property
    def minimal_idempotent(self) -> tuple[int, ...]:
        """For each point, the product of every idempotent whose domain holds it."""
        S = self.semigroup
        out = []
        for x in range(len(self.points)):
            es = self.idempotents_at(x)
            if not es:
                raise DomainViolation(f"point {self.points[x]!r} lies in no domain")
            out.append(S.prod(*es))
        return tuple(out)


# -- validation -----------------------------------------------------------

@dataclass
class ActionReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, *witness):
        self.violations.append((kind, witness))


def validate_action(A: Action, *, limit: int | None = None) -> ActionReport:
    """Report every failed action invariant with a witness; empty means valid."""
    S = A.semigroup
    rep = ActionReport(notes=["continuity and openness of domains hold vacuously on a finite discrete space"])
    n = len(A.points)
    if len(A.maps) != len(S):
        rep.add("arity", len(A.maps), len(S))
        return rep
    for s, f in enumerate(A.maps):
        if not (f.domain | f.image) <= set(range(n)):
            rep.add("points", S.label(s))
    if rep.violations:
        return rep

    if S.zero is not None and A.maps[S.zero]:
        rep.add("zero not empty map", S.label(S.zero))
    covered = set().union(*(f.domain for f in A.maps)) if A.maps else set()
    for x in range(n):
        if x not in covered:
            rep.add("domains do not cover X", A.points[x])
    for e in S.idempotents:
        if not A.maps[e].is_partial_identity():
            rep.add("idempotent not a partial identity", S.label(e))
    for s in S.elements:
        if A.domain(s) != A.domain(S.source_idempotent(s)):
            rep.add("domain of s differs from domain of s*s", S.label(s))
        if A.maps[S.inv[s]] != A.maps[s].inverse():
            rep.add("map of s* is not the inverse map", S.label(s))
    for s, t in itertools.product(S.elements, repeat=2):
        if compose_partial(A.maps[s], A.maps[t]) != A.maps[S.mul(s, t)]:
            rep.add("not a homomorphism", S.label(s), S.label(t))
            if limit is not None and len(rep.violations) >= limit:
                break
    return rep


# -- germs ----------------------------------------------------------------

def germ_equal(A: Action, s: int, t: int, x: int) -> bool:
    """[s,x] = [t,x]: some idempotent e has x ∈ D_e and se = te."""
    if not (A.in_domain(s, x) and A.in_domain(t, x)):
        raise DomainViolation(f"point {A.points[x]!r} is not in the domain of both elements")
    S = A.semigroup
    return any(x in A.maps[e] and S.mul(s, e) == S.mul(t, e) for e in S.idempotents)


class GermGroupoid(FiniteGroupoid):
    """G(α) with each arrow remembered as its least representative (s, x).

    Two pairs (s, x), (t, x) are identified exactly when s·m = t·m, where m
    is the smallest idempotent whose domain contains x; this is the same
    relation as :func:`germ_equal` because any witness e satisfies m ⩽ e.
    """

    def __init__(self, action: Action, reps, product, inverse, unit_of_point, lookup):
        S = action.semigroup
        labels = [f"[{S.label(s)},{action.points[x]}]" for s, x in reps]
        super().__init__(len(reps), product, inverse, labels)
        self.action = action
        self.reps: tuple[tuple[int, int], ...] = tuple(reps)
        self.unit_of_point: tuple[int, ...] = tuple(unit_of_point)
        self._lookup = lookup
        self.point_of_unit = {u: x for x, u in enumerate(self.unit_of_point)}

    def germ(self, s: int, x: int) -> int:
        """Arrow id of the class [s, x]."""
        A = self.action
        if not A.in_domain(s, x):
            raise DomainViolation(f"{A.points[x]!r} is not in the domain of {A.semigroup.label(s)!r}")
        return self._lookup[(x, A.semigroup.mul(s, A.minimal_idempotent[x]))]

    def source_point(self, g: int) -> int:
        return self.reps[g][1]

    def range_point(self, g: int) -> int:
        s, x = self.reps[g]
        return self.action(s, x)

    def fiber_at_point(self, x: int) -> tuple[int, ...]:
        return self.d_fiber(self.unit_of_point[x])


def build_germ_groupoid(A: Action) -> GermGroupoid:
    rep = validate_action(A, limit=1)
    if not rep.ok:
        raise InvalidAction(rep)
    S = A.semigroup
    m = A.minimal_idempotent

    reps: list[tuple[int, int]] = []
    lookup: dict[tuple[int, int], int] = {}
    by_point: list[list[int]] = []
    for x in range(len(A.points)):
        here = []
        for s in A.defined_at(x):
            key = (x, S.mul(s, m[x]))
            if key not in lookup:
                lookup[key] = len(reps)
                here.append(len(reps))
                reps.append((s, x))
        by_point.append(here)

    def cls(s, x):
        return lookup[(x, S.mul(s, m[x]))]

    unit_of_point = [cls(m[x], x) for x in range(len(A.points))]
    inverse = [cls(S.inv[s], A(s, x)) for s, x in reps]
    product = {}
    for b, (s, x) in enumerate(reps):
        y = A(s, x)
        for a in by_point[y]:
            t = reps[a][0]
            product[(a, b)] = cls(S.mul(t, s), x)
    return GermGroupoid(A, reps, product, inverse, unit_of_point, lookup)


def basis_arrow_set(Gp: GermGroupoid, s: int, U: Iterable[int]) -> tuple[int, ...]:
    """Θ(s, U) = {[s, x] : x ∈ U}, as sorted arrow ids."""
    U = set(U)
    dom = Gp.action.domain(s)
    if not U <= dom:
        raise DomainViolation(f"points {sorted(U - dom)} lie outside the domain of {Gp.action.semigroup.label(s)!r}")
    return tuple(sorted({Gp.germ(s, x) for x in U}))


# -- building new actions from old ----------------------------------------

def orbits(A: Action) -> list[frozenset[int]]:
    parent = list(range(len(A.points)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in A.maps:
        for x, y in f.pairs:
            parent[find(x)] = find(y)
    groups: dict[int, set[int]] = {}
    for x in range(len(A.points)):
        groups.setdefault(find(x), set()).add(x)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def restrict(A: Action, points: Iterable[int]) -> Action:
    """Restriction to an invariant subset, points renumbered in order."""
    keep = sorted(set(points))
    pos = {x: i for i, x in enumerate(keep)}
    maps = []
    for s, f in enumerate(A.maps):
        pairs = []
        for x, y in f.pairs:
            if (x in pos) != (y in pos):
                raise ValueError(f"subset is not invariant under {A.semigroup.label(s)!r}")
            if x in pos:
                pairs.append((pos[x], pos[y]))
        maps.append(PartialBijection(tuple(pairs)))
    return Action(A.semigroup, tuple(A.points[x] for x in keep), tuple(maps))


def disjoint_union(A: Action, B: Action, tags: tuple[str, str] = ("a", "b")) -> Action:
    if A.semigroup is not B.semigroup:
        raise ValueError("actions of different semigroups")
    k = len(A.points)
    points = tuple(f"{tags[0]}{p}" for p in A.points) + tuple(f"{tags[1]}{p}" for p in B.points)
    maps = tuple(
        PartialBijection(f.pairs + tuple((x + k, y + k) for x, y in g.pairs)) for f, g in zip(A.maps, B.maps)
    )
    return Action(A.semigroup, points, maps)


def relabel(A: Action, perm: Sequence[int], points: Sequence[str] | None = None) -> Action:
    """Transport along the point bijection x -> perm[x]."""
    maps = tuple(PartialBijection(tuple((perm[x], perm[y]) for x, y in f.pairs)) for f in A.maps)
    if points is None:
        new = [None] * len(perm)
        for x, p in enumerate(perm):
            new[p] = A.points[x]
        points = new
    return Action(A.semigroup, tuple(points), maps)


def natural_action(S: InverseSemigroup) -> Action:
    """I(n) acting on {1..n} by its own partial bijections."""
    if S.payload is None:
        raise ValueError("semigroup carries no concrete partial bijections")
    n = max((max(f.domain | f.image) for f in S.payload if f), default=-1) + 1
    return Action(S, tuple(str(i + 1) for i in range(n)), S.payload)


def munn_action(S: InverseSemigroup) -> Action:
    """S on its nonzero idempotents: e ↦ s e s* for e ⩽ s*s."""
    pts = S.nonzero_idempotents
    pos = {e: i for i, e in enumerate(pts)}
    maps = []
    for s in S.elements:
        src = S.source_idempotent(s)
        maps.append(
            PartialBijection(tuple((pos[e], pos[S.prod(s, e, S.inv[s])]) for e in pts if S.leq(e, src)))
        )
    return Action(S, tuple(S.label(e) for e in pts), tuple(maps))


def preston_action(S: InverseSemigroup) -> Action:
    """S on its nonzero elements by left multiplication: x ↦ sx for xx* ⩽ s*s."""
    pts = [x for x in S.elements if x != S.zero]
    pos = {x: i for i, x in enumerate(pts)}
    maps = []
    for s in S.elements:
        src = S.source_idempotent(s)
        maps.append(
            PartialBijection(tuple((pos[x], pos[S.mul(s, x)]) for x in pts if S.leq(S.range_idempotent(x), src)))
        )
    return Action(S, tuple(S.label(x) for x in pts), tuple(maps))


# -- action files ---------------------------------------------------------

_ARROW = re.compile(r"^\s*(\S+)\s*->\s*(\S+)\s*$")


def _close_under_products(S: InverseSemigroup, known: dict[int, PartialBijection]):
    for s in list(known):
        known.setdefault(S.inv[s], known[s].inverse())
    frontier = list(known)
    while frontier:
        new = []
        current = list(known)
        for a in frontier:
            for b in current:
                for s, t in ((a, b), (b, a)):
                    c = S.mul(s, t)
                    if c not in known:
                        known[c] = compose_partial(known[s], known[t])
                        new.append(c)
        frontier = new
    return known


def parse_action(
    text: str,
    path=None,
    *,
    load_semigroup: Callable[[str, Path | None], InverseSemigroup] | None = None,
) -> Action:
    """Parse an action file.

    ::

        semigroup: i2.sg
        points: a b
        1-: a->a
        21: a->b, b->a

    Elements that are not listed are filled in by closing the listed maps
    under products and inverses; the zero defaults to the empty map.
    """
    if load_semigroup is None:
        load_semigroup = resolve_semigroup
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(lines) < 2:
        raise FormatError("expected 'semigroup:' and 'points:' header lines", path=path)
    (sno, sline), (pno, pline) = lines[0], lines[1]
    if not sline.startswith("semigroup:"):
        raise FormatError("first line must be 'semigroup: <file>'", sno, path)
    if not pline.startswith("points:"):
        raise FormatError("second line must be 'points: <labels>'", pno, path)
    base = Path(path).parent if path is not None else None
    S = load_semigroup(sline.partition(":")[2].strip(), base)
    points = pline.partition(":")[2].split()
    if len(set(points)) != len(points):
        raise FormatError("duplicate point label", pno, path)
    pindex = {p: i for i, p in enumerate(points)}

    listed: dict[int, PartialBijection] = {}
    for no, line in lines[2:]:
        head, sep, rest = line.partition(":")
        if not sep:
            raise FormatError("expected '<element>: x->y, ...'", no, path)
        try:
            s = S.index(head.strip())
        except KeyError:
            raise FormatError(f"unknown element {head.strip()!r}", no, path) from None
        if s in listed:
            raise FormatError(f"element {head.strip()!r} listed twice", no, path)
        pairs = []
        for chunk in filter(None, (c.strip() for c in rest.split(","))):
            m = _ARROW.match(chunk)
            if not m or m.group(1) not in pindex or m.group(2) not in pindex:
                raise FormatError(f"bad mapping {chunk!r}", no, path)
            pairs.append((pindex[m.group(1)], pindex[m.group(2)]))
        try:
            listed[s] = PartialBijection(tuple(pairs))
        except ValueError as exc:
            raise FormatError(str(exc), no, path) from None

    known = dict(listed)
    if S.zero is not None:
        known.setdefault(S.zero, EMPTY)
    _close_under_products(S, known)
    missing = [S.label(s) for s in S.elements if s not in known]
    if missing:
        raise FormatError(f"listed elements do not generate S; missing {missing[:5]}", path=path)
    return Action(S, tuple(points), tuple(known[s] for s in S.elements))


def resolve_semigroup(ref: str, base: Path | None = None) -> InverseSemigroup:
    """Load a semigroup: file next to the action file, file path, shipped data, builtin name."""
    from . import data

    candidates = []
    p = Path(ref)
    if base is not None and not p.is_absolute():
        candidates.append(base / p)
    candidates.append(p)
    candidates.append(data.path(ref))
    for c in candidates:
        if c.is_file():
            return read_semigroup(c)
    from .corpus import named_semigroup

    try:
        return named_semigroup(ref)
    except KeyError:
        raise FormatError(f"semigroup {ref!r} is neither a file nor a builtin name") from None


def read_action(path) -> Action:
    path = Path(path)
    return parse_action(path.read_text(encoding="utf-8"), path=path)


def format_action(A: Action, semigroup_ref: str) -> str:
    S = A.semigroup
    out = [f"semigroup: {semigroup_ref}", "points: " + " ".join(A.points)]
    for s in S.elements:
        f = A.maps[s]
        body = ", ".join(f"{A.points[x]}->{A.points[y]}" for x, y in f.pairs)
        out.append(f"{S.label(s)}: {body}".rstrip())
    return "\n".join(out) + "\n"

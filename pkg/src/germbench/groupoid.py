"""Finite groupoids as partial product tables, plus homomorphisms between them.

Arrows are integers ``0..n-1``. A pair ``(g, h)`` is composable when it is a
key of the product table; ``g*h`` means "h first, then g", so composability
amounts to r(h) = d(g).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import FormatError, NotAHomomorphism, NotAUnit, SizeGuard

MAX_COMPOSABLE_PAIRS = 10**6


class FiniteGroupoid:
    def __init__(
        self,
        n_arrows: int,
        product: Mapping[tuple[int, int], int],
        inverse: Sequence[int],
        labels: Sequence[str] | None = None,
    ):
        self.n_arrows = int(n_arrows)
        self.product: dict[tuple[int, int], int] = dict(product)
        self.inverse: tuple[int, ...] = tuple(inverse)
        if labels is None:
            labels = [str(i) for i in range(self.n_arrows)]
        self.labels: tuple[str, ...] = tuple(labels)

    def __repr__(self):
        return f"{type(self).__name__}(arrows={self.n_arrows}, units={len(self.units)})"

    @property
    def arrows(self) -> range:
        return range(self.n_arrows)

    def composable(self, g: int, h: int) -> bool:
        return (g, h) in self.product

    def mul(self, g: int, h: int) -> int:
        return self.product[(g, h)]

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def r(self, g: int) -> int:
        return self.product[(g, self.inverse[g])]

    def d(self, g: int) -> int:
        return self.product[(self.inverse[g], g)]

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(sorted({self.r(g) for g in self.arrows}))

    @cached_property
    def _unit_set(self) -> frozenset[int]:
        return frozenset(self.units)

    def is_unit(self, x: int) -> bool:
        return x in self._unit_set

    @cached_property
    def _d_fibers(self) -> dict[int, tuple[int, ...]]:
        out = defaultdict(list)
        for g in self.arrows:
            out[self.d(g)].append(g)
        return {x: tuple(v) for x, v in out.items()}

    @cached_property
    def _r_fibers(self) -> dict[int, tuple[int, ...]]:
        out = defaultdict(list)
        for g in self.arrows:
            out[self.r(g)].append(g)
        return {x: tuple(v) for x, v in out.items()}

    def d_fiber(self, x: int) -> tuple[int, ...]:
        """G_x = d⁻¹(x)."""
        if not self.is_unit(x):
            raise NotAUnit(f"arrow {x} is not a unit")
        return self._d_fibers.get(x, ())

    def r_fiber(self, x: int) -> tuple[int, ...]:
        """G^x = r⁻¹(x)."""
        if not self.is_unit(x):
            raise NotAUnit(f"arrow {x} is not a unit")
        return self._r_fibers.get(x, ())

    def isotropy(self, x: int) -> tuple[int, ...]:
        return tuple(g for g in self.d_fiber(x) if self.r(g) == x)


def d_fiber(G: FiniteGroupoid, x: int) -> tuple[int, ...]:
    return G.d_fiber(x)


def r_fiber(G: FiniteGroupoid, x: int) -> tuple[int, ...]:
    return G.r_fiber(x)


# -- axioms ---------------------------------------------------------------

@dataclass
class AxiomReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *witness):
        self.violations.append((axiom, witness))


def check_axioms(G: FiniteGroupoid, *, limit: int | None = None, max_pairs: int = MAX_COMPOSABLE_PAIRS) -> AxiomReport:
    """Check the groupoid axioms exhaustively and list every violation found.

    Axioms checked: inverse is an involution; (g,h),(h,k) composable forces
    (gh,k),(g,hk) composable with (gh)k = g(hk); (g,g⁻¹),(g⁻¹,g) composable
    with g⁻¹(gh) = h and (kg)g⁻¹ = k; and (g,h) composable iff r(h) = d(g).
    ``limit`` stops after that many witnesses.
    """
    rep = AxiomReport()
    n = G.n_arrows
    P = G.product
    inv = G.inverse
    if len(P) > max_pairs:
        raise SizeGuard(f"{len(P)} composable pairs exceeds the guard {max_pairs}")

    def full():
        return limit is not None and len(rep.violations) >= limit

    if len(inv) != n:
        rep.add("inverse-total", len(inv), n)
        return rep
    for g in range(n):
        if not 0 <= inv[g] < n:
            rep.add("inverse-range", g, inv[g])
    for (g, h), gh in P.items():
        if not (0 <= g < n and 0 <= h < n and 0 <= gh < n):
            rep.add("product-range", g, h, gh)
    if rep.violations:
        return rep

    for g in range(n):
        if inv[inv[g]] != g:
            rep.add("involution", g)
            if full():
                return rep

    for g in range(n):
        gi = inv[g]
        if (g, gi) not in P:
            rep.add("inverse-composable", g, gi)
        if (gi, g) not in P:
            rep.add("inverse-composable", gi, g)
        if full():
            return rep

    for (g, h), gh in P.items():
        gi = inv[g]
        if P.get((gi, gh)) != h:
            rep.add("left-cancellation", g, h)
        hi = inv[h]
        if P.get((gh, hi)) != g:
            rep.add("right-cancellation", g, h)
        if full():
            return rep

    def r(g):
        return P.get((g, inv[g]))

    def d(g):
        return P.get((inv[g], g))

    for g in range(n):
        dg = d(g)
        for h in range(n):
            rh = r(h)
            should = dg is not None and rh is not None and rh == dg
            if ((g, h) in P) != should:
                rep.add("composability", g, h)
                if full():
                    return rep

    # associativity last: it is the only cubic scan
    right = defaultdict(list)  # h -> [k : (h, k) composable]
    for g, h in P:
        right[g].append(h)
    for (g, h), gh in P.items():
        for k in right[h]:
            hk = P[(h, k)]
            if (gh, k) not in P or (g, hk) not in P:
                rep.add("associativity-composable", g, h, k)
            elif P[(gh, k)] != P[(g, hk)]:
                rep.add("associativity", g, h, k)
            if full():
                return rep
    return rep


# -- homomorphisms --------------------------------------------------------

@dataclass(frozen=True)
class GroupoidHom:
    source: FiniteGroupoid
    target: FiniteGroupoid
    arrow_map: tuple[int, ...]

    def __call__(self, g: int) -> int:
        return self.arrow_map[g]


def homomorphism_failures(h: GroupoidHom, *, limit: int | None = 1) -> list[tuple[str, tuple]]:
    G, H, phi = h.source, h.target, h.arrow_map
    out: list[tuple[str, tuple]] = []
    if len(phi) != G.n_arrows or any(not 0 <= a < H.n_arrows for a in phi):
        return [("total", ())]
    for (g, k), gk in G.product.items():
        pair = (phi[g], phi[k])
        if pair not in H.product:
            out.append(("composable", (g, k)))
        elif H.product[pair] != phi[gk]:
            out.append(("multiplicative", (g, k)))
        if limit is not None and len(out) >= limit:
            return out
    if out:
        return out
    # consequences of multiplicativity, checked anyway
    for g in G.arrows:
        if phi[G.inv(g)] != H.inv(phi[g]):
            out.append(("inverse", (g,)))
        elif phi[G.r(g)] != H.r(phi[g]) or phi[G.d(g)] != H.d(phi[g]):
            out.append(("range-source", (g,)))
        if limit is not None and len(out) >= limit:
            break
    return out


def is_homomorphism(h: GroupoidHom) -> bool:
    return not homomorphism_failures(h)


def _fiber_failures(h: GroupoidHom, fiber_of_source, fiber_of_target) -> list[int]:
    bad = []
    for x in h.source.units:
        imgs = [h.arrow_map[g] for g in fiber_of_source(x)]
        want = fiber_of_target(h.arrow_map[x])
        if len(set(imgs)) != len(imgs) or set(imgs) != set(want):
            bad.append(x)
    return bad


def d_bijectivity_failures(h: GroupoidHom) -> list[int]:
    """Units x of the source where G_x -> H_φ(x) is not a bijection."""
    if not is_homomorphism(h):
        raise NotAHomomorphism(str(homomorphism_failures(h)))
    return _fiber_failures(h, h.source.d_fiber, h.target.d_fiber)


def r_bijectivity_failures(h: GroupoidHom) -> list[int]:
    if not is_homomorphism(h):
        raise NotAHomomorphism(str(homomorphism_failures(h)))
    return _fiber_failures(h, h.source.r_fiber, h.target.r_fiber)


def is_d_bijective(h: GroupoidHom) -> bool:
    return not d_bijectivity_failures(h)


def is_r_bijective(h: GroupoidHom) -> bool:
    return not r_bijectivity_failures(h)


# -- small constructors ---------------------------------------------------

def group_groupoid(table: Sequence[Sequence[int]], labels=None) -> FiniteGroupoid:
    """A finite group (Cayley table on 0..n-1) as a one-unit groupoid."""
    n = len(table)
    e = next(i for i in range(n) if all(table[i][j] == j for j in range(n)))
    inverse = [next(j for j in range(n) if table[i][j] == e) for i in range(n)]
    product = {(i, j): table[i][j] for i in range(n) for j in range(n)}
    return FiniteGroupoid(n, product, inverse, labels)


def pair_groupoid(k: int) -> FiniteGroupoid:
    """X × X for X = {0..k-1}: one arrow (i, j) from j to i for every pair."""
    arrows = [(i, j) for i in range(k) for j in range(k)]
    idx = {a: n for n, a in enumerate(arrows)}
    product = {}
    for (a, b) in arrows:
        for (c, e) in arrows:
            if b == c:
                product[(idx[(a, b)], idx[(c, e)])] = idx[(a, e)]
    inverse = [idx[(j, i)] for (i, j) in arrows]
    return FiniteGroupoid(len(arrows), product, inverse, [f"({i},{j})" for i, j in arrows])


# -- export ---------------------------------------------------------------

def to_json_dict(G: FiniteGroupoid) -> dict:
    return {
        "units": list(G.units),
        "arrows": [
            {"id": g, "label": G.labels[g], "src": G.d(g), "rng": G.r(g), "inverse": G.inv(g)}
            for g in G.arrows
        ],
        "product": [[g, h, gh] for (g, h), gh in sorted(G.product.items())],
    }


def dumps(G: FiniteGroupoid) -> str:
    return json.dumps(to_json_dict(G), indent=1, sort_keys=True) + "\n"


def from_json_dict(data: dict) -> FiniteGroupoid:
    try:
        arrows = sorted(data["arrows"], key=lambda a: a["id"])
        n = len(arrows)
        if [a["id"] for a in arrows] != list(range(n)):
            raise FormatError("arrow ids must be 0..n-1")
        product = {}
        for entry in data["product"]:
            g, h, gh = (int(v) for v in entry)
            if (g, h) in product:
                raise FormatError(f"duplicate product entry for ({g}, {h})")
            product[(g, h)] = gh
        G = FiniteGroupoid(n, product, [int(a["inverse"]) for a in arrows], [str(a.get("label", a["id"])) for a in arrows])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed groupoid JSON: {exc}") from exc
    rep = check_axioms(G, limit=1)
    if not rep.ok:
        raise FormatError(f"groupoid JSON fails the axioms: {rep.violations[0]}")
    for a in arrows:
        if "src" in a and (a["src"] != G.d(a["id"]) or a["rng"] != G.r(a["id"])):
            raise FormatError(f"arrow {a['id']}: src/rng disagree with the product table")
    return G


def loads(text: str) -> FiniteGroupoid:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from exc
    return from_json_dict(data)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(G: FiniteGroupoid, name: str = "G") -> str:
    """Units as nodes, non-unit arrows as labelled edges d(g) -> r(g)."""
    lines = [f"digraph {name} {{"]
    for x in G.units:
        lines.append(f"  u{x} [label={_dot_quote(G.labels[x])}];")
    for g in G.arrows:
        if G.is_unit(g):
            continue
        lines.append(f"  u{G.d(g)} -> u{G.r(g)} [label={_dot_quote(G.labels[g])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"

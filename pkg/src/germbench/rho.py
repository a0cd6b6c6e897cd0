"""The map ρ: X -> Ê of an action, the induced ρ̃: G(α) -> G(θ), and checks of both."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .action import Action, GermGroupoid, basis_arrow_set, build_germ_groupoid, germ_equal
from .errors import DomainViolation, SizeGuard, WellDefinednessFailure
from .groupoid import GroupoidHom
from .spectrum import Filter, Spectrum, canonical_action, enumerate_filters, filter_label, theta_apply

MAX_GERM_CANDIDATES = 10**5


def rho_point(A: Action, x: int) -> Filter:
    """ρ(x) = {e ∈ E : x ∈ D_e}."""
    return frozenset(e for e in A.semigroup.idempotents if A.in_domain(e, x))


@dataclass(frozen=True, eq=False)
class RhoBundle:
    action: Action
    canonical: Action
    spectrum: Spectrum
    point_map: tuple[int, ...]  # x -> index of ρ(x) in the spectrum
    source: GermGroupoid  # G(α)
    target: GermGroupoid  # G(θ)
    hom: GroupoidHom  # ρ̃

    def rho(self, x: int) -> Filter:
        return self.spectrum.filters[self.point_map[x]]


def rho_bundle(A: Action, *, spectrum: Spectrum | None = None, target: GermGroupoid | None = None) -> RhoBundle:
    S = A.semigroup
    spec = spectrum or enumerate_filters(S)
    theta = target.action if target is not None else canonical_action(S, spec)
    Gt = target if target is not None else build_germ_groupoid(theta)
    Ga = build_germ_groupoid(A)

    point_map = []
    for x in range(len(A.points)):
        xi = rho_point(A, x)
        if xi not in spec:
            raise WellDefinednessFailure(f"ρ({A.points[x]!r}) = {sorted(xi)} is not a filter")
        point_map.append(spec.index(xi))

    arrow_map: dict[int, int] = {}
    for x in range(len(A.points)):
        for s in A.defined_at(x):
            a = Ga.germ(s, x)
            b = Gt.germ(s, point_map[x])
            if arrow_map.setdefault(a, b) != b:
                raise WellDefinednessFailure(
                    f"representatives of {Ga.labels[a]} land on {Gt.labels[arrow_map[a]]} and {Gt.labels[b]}"
                )
    hom = GroupoidHom(Ga, Gt, tuple(arrow_map[a] for a in Ga.arrows))
    return RhoBundle(A, theta, spec, tuple(point_map), Ga, Gt, hom)


def rho_tilde(A: Action) -> GroupoidHom:
    """ρ̃([s, x]) = [s, ρ(x)] as an explicit arrow table."""
    return rho_bundle(A).hom


@dataclass
class RhoFactsReport:
    violations: list[tuple[int, tuple]] = field(default_factory=list)
    checked: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0, 4: 0})

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_rhofacts(A: Action, *, max_candidates: int = MAX_GERM_CANDIDATES) -> RhoFactsReport:
    """Check the four facts about ρ exhaustively over points, idempotents and elements.

    1. x ∈ D_e^α  iff  ρ(x) ∈ D_e^θ
    2. {s : x ∈ D^α_{s*s}} = {s : ρ(x) ∈ D^θ_{s*s}}
    3. [s,x] = [t,x] in G(α)  iff  [s,ρ(x)] = [t,ρ(x)] in G(θ)
    4. ρ(α_s(x)) = θ_s(ρ(x))

    θ is taken from the materialised canonical action, not re-derived, so the
    check exercises the same tables the groupoids are built from.
    """
    S = A.semigroup
    if len(S) * len(A.points) > max_candidates:
        raise SizeGuard(f"|S|·|X| = {len(S) * len(A.points)} exceeds the guard {max_candidates}")
    spec = enumerate_filters(S)
    theta = canonical_action(S, spec)
    rep = RhoFactsReport()
    for x in range(len(A.points)):
        xi = rho_point(A, x)
        if xi not in spec:
            rep.violations.append((0, (A.points[x], "rho(x) is not a filter")))
            continue
        p = spec.index(xi)
        for e in S.idempotents:
            rep.checked[1] += 1
            if A.in_domain(e, x) != theta.in_domain(e, p):
                rep.violations.append((1, (A.points[x], S.label(e))))
        on_x = [s for s in S.elements if A.in_domain(S.source_idempotent(s), x)]
        on_p = [s for s in S.elements if theta.in_domain(S.source_idempotent(s), p)]
        rep.checked[2] += 1
        if on_x != on_p:
            rep.violations.append((2, (A.points[x], tuple(S.label(s) for s in set(on_x) ^ set(on_p)))))
            continue
        # a corrupted action can have x ∈ D_{s*s} without α_s defined at x;
        # fact 4 reports that, so only compare germs that exist here
        defined = [s for s in on_x if A.in_domain(s, x)]
        for s, t in itertools.combinations_with_replacement(defined, 2):
            rep.checked[3] += 1
            if germ_equal(A, s, t, x) != germ_equal(theta, s, t, p):
                rep.violations.append((3, (A.points[x], S.label(s), S.label(t))))
        for s in on_x:
            rep.checked[4] += 1
            if not A.in_domain(s, x):
                rep.violations.append((4, (A.points[x], S.label(s), "alpha_s undefined")))
                continue
            lhs = rho_point(A, A(s, x))
            rhs = spec.filters[theta(s, p)] if theta.in_domain(s, p) else None
            if lhs != rhs or lhs != theta_apply(S, s, xi):
                rep.violations.append((4, (A.points[x], S.label(s))))
    return rep


def preimage_failures(bundle: RhoBundle) -> list[tuple]:
    """Set-equality form of the Borel statements on a finite space.

    ρ⁻¹(D_e^θ) = D_e^α for every idempotent e, and
    ρ̃⁻¹(Θ(s, D_e^θ)) = Θ(s, D_e^α) whenever D_e^θ ⊆ D_{s*s}^θ.
    """
    A, theta, S = bundle.action, bundle.canonical, bundle.action.semigroup
    out = []
    for e in S.idempotents:
        pre = {x for x in range(len(A.points)) if theta.in_domain(e, bundle.point_map[x])}
        if pre != set(A.domain(e)):
            out.append(("rho", S.label(e)))
    phi = bundle.hom.arrow_map
    for s in S.elements:
        dom_s = theta.domain(S.source_idempotent(s))
        for e in S.idempotents:
            De = theta.domain(e)
            if not De <= dom_s:
                continue
            target = set(basis_arrow_set(bundle.target, s, De))
            pre = {g for g in bundle.source.arrows if phi[g] in target}
            try:
                ok = pre == set(basis_arrow_set(bundle.source, s, A.domain(e)))
            except DomainViolation:
                ok = False
            if not ok:
                out.append(("rho-tilde", S.label(s), S.label(e)))
    return out


def rho_table(bundle: RhoBundle) -> list[tuple[str, str]]:
    S = bundle.action.semigroup
    return [(p, filter_label(S, bundle.rho(x))) for x, p in enumerate(bundle.action.points)]

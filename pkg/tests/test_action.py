import itertools

import pytest

from germbench import data
from germbench.action import (
    Action,
    basis_arrow_set,
    build_germ_groupoid,
    disjoint_union,
    format_action,
    germ_equal,
    natural_action,
    orbits,
    parse_action,
    read_action,
    restrict,
    validate_action,
)
from germbench.corpus import named_semigroup
from germbench.errors import DomainViolation, FormatError, InvalidAction
from germbench.groupoid import check_axioms
from germbench.partial import EMPTY, PartialBijection, compose_partial
from germbench.semigroup import (
    adjoin_zero,
    cyclic_group,
    double_zero_example,
    format_semigroup,
    parse_semigroup,
    read_semigroup,
)
from germbench.spectrum import canonical_action, enumerate_filters
from oracles import germ_classes_brute


def pb(*pairs):
    return PartialBijection(tuple(pairs))


def point_action(S):
    """Every nonzero element acts as the identity on a single point."""
    return Action(S, ("x",), tuple(EMPTY if s == S.zero else pb((0, 0)) for s in S.elements))


# -- partial bijections ---------------------------------------------------

def test_compose_partial_examples():
    f = pb((0, 1), (1, 2))
    assert compose_partial(f, EMPTY) == EMPTY
    U, V = PartialBijection.identity({0, 1}), PartialBijection.identity({1, 2})
    assert compose_partial(U, V) == PartialBijection.identity({1})
    # range of g misses the domain of f
    assert compose_partial(pb((5, 6)), pb((0, 1))) == EMPTY
    assert compose_partial(f, f.inverse()) == PartialBijection.identity({1, 2})


def test_partial_bijection_rejects_non_injective():
    with pytest.raises(ValueError):
        pb((0, 1), (2, 1))


# -- validation -----------------------------------------------------------

def test_valid_actions(corpus):
    for _, A in corpus:
        rep = validate_action(A)
        assert rep.ok, rep.violations
        assert rep.notes


def test_zero_acting_as_identity_rejected():
    S = adjoin_zero(cyclic_group(2))
    A = Action(S, ("x",), tuple(pb((0, 0)) for _ in S.elements))
    kinds = [k for k, _ in validate_action(A).violations]
    assert "zero not empty map" in kinds


def test_broken_homomorphism_has_witness():
    S = named_semigroup("I2")
    A = natural_action(S)
    swap = S.index("21")
    maps = list(A.maps)
    maps[swap] = PartialBijection.identity({0, 1})
    rep = validate_action(Action(S, A.points, tuple(maps)))
    hom = [w for k, w in rep.violations if k == "not a homomorphism"]
    assert hom
    assert any("21" in w for w in hom)


def test_uncovered_point_rejected():
    S = adjoin_zero(cyclic_group(2))
    A = Action(S, ("x", "y"), tuple(EMPTY if s == S.zero else pb((0, 0)) for s in S.elements))
    assert ("domains do not cover X", ("y",)) in validate_action(A).violations
    with pytest.raises(InvalidAction):
        build_germ_groupoid(A)


# -- germs ----------------------------------------------------------------

def test_germ_equal_reflexive(corpus):
    for _, A in corpus[:20]:
        for x in range(len(A)):
            for s in A.defined_at(x):
                assert germ_equal(A, s, s, x)


def test_germ_equal_outside_domain():
    S = adjoin_zero(cyclic_group(2))
    A = point_action(S)
    with pytest.raises(DomainViolation):
        germ_equal(A, S.zero, S.index("g"), 0)


def test_double_zero_germs():
    S = double_zero_example(cyclic_group(3))
    spec = enumerate_filters(S)
    theta = canonical_action(S, spec)
    one, zero = S.index("1"), S.index("0")
    xi = spec.index({one, zero})
    eta = spec.index({one})
    group_and_zero = [S.index(x) for x in ("1", "g", "g^2", "0")]
    for s, t in itertools.product(group_and_zero, repeat=2):
        assert germ_equal(theta, s, t, xi)
    group = group_and_zero[:3]
    for s, t in itertools.product(group, repeat=2):
        assert germ_equal(theta, s, t, eta) == (s == t)


def test_germ_relation_is_equivalence(corpus):
    for _, A in corpus[::5]:
        assert len(A.semigroup) <= 50
        for x in range(len(A)):
            dom = A.defined_at(x)
            rel = {(s, t): germ_equal(A, s, t, x) for s in dom for t in dom}
            for s, t in rel:
                assert rel[(s, t)] == rel[(t, s)]
            for s, t, u in itertools.product(dom, repeat=3):
                if rel[(s, t)] and rel[(t, u)]:
                    assert rel[(s, u)]


def test_germ_groupoid_matches_brute_force_classes(corpus):
    for _, A in corpus[::3]:
        G = build_germ_groupoid(A)
        S = A.semigroup
        for x in range(len(A)):
            brute = set(germ_classes_brute(A.maps, S.mul, S.idempotents, x))
            fast = {}
            for s in A.defined_at(x):
                fast.setdefault(G.germ(s, x), set()).add(s)
            assert {frozenset(v) for v in fast.values()} == brute
            # one class per germ in the source fiber at x
            assert len(G.fiber_at_point(x)) == len(brute)


def test_germ_groupoid_axioms_and_inverses(corpus):
    for _, A in corpus:
        G = build_germ_groupoid(A)
        assert check_axioms(G).ok
        for g, (s, x) in enumerate(G.reps):
            assert G.source_point(g) == x
            assert G.d(g) == G.unit_of_point[x]
            assert G.r(g) == G.unit_of_point[A(s, x)]
            assert G.reps[g][0] == min(t for t in A.defined_at(x) if G.germ(t, x) == g)


def test_group_with_zero_on_a_point():
    for n in (1, 2, 5):
        G = build_germ_groupoid(point_action(adjoin_zero(cyclic_group(n))))
        assert len(G.units) == 1 and G.n_arrows == n


def test_double_zero_z2_universal_groupoid():
    S = double_zero_example(cyclic_group(2))
    G = build_germ_groupoid(canonical_action(S))
    assert G.n_arrows == 3 and len(G.units) == 2
    assert sorted(len(G.d_fiber(u)) for u in G.units) == [1, 2]


def test_unit_germs_compose_as_identities(corpus):
    for _, A in corpus[::4]:
        G = build_germ_groupoid(A)
        S = A.semigroup
        for e in S.idempotents:
            for x in A.domain(e):
                u = G.germ(e, x)
                assert G.is_unit(u)
                assert G.mul(u, u) == u


def test_basis_arrow_sets(corpus):
    for _, A in corpus[::4]:
        G = build_germ_groupoid(A)
        S = A.semigroup
        covered = set()
        for s in S.elements:
            assert basis_arrow_set(G, s, ()) == ()
            covered |= set(basis_arrow_set(G, s, A.domain(s)))
        assert covered == set(G.arrows)
        for e in S.idempotents:
            arrows = basis_arrow_set(G, e, A.domain(e))
            assert set(arrows) == {G.unit_of_point[x] for x in A.domain(e)}
        s = next((s for s in S.elements if len(A.domain(s)) < len(A)), None)
        if s is not None:
            outside = next(x for x in range(len(A)) if x not in A.domain(s))
            with pytest.raises(DomainViolation):
                basis_arrow_set(G, s, [outside])


def test_orbits_restrict_union():
    S = named_semigroup("I2")
    A = disjoint_union(natural_action(S), canonical_action(S))
    orbs = orbits(A)
    # the natural action is one orbit; the spectrum splits as {↑12} and {↑1-, ↑-2}
    assert sorted(len(o) for o in orbs) == [1, 2, 2]
    for o in orbs:
        assert validate_action(restrict(A, o)).ok
    with pytest.raises(ValueError):
        restrict(A, [0])


# -- files ----------------------------------------------------------------

def test_semigroup_file_round_trip(small_semigroup):
    _, S = small_semigroup
    T = parse_semigroup(format_semigroup(S, "comment"))
    assert T.labels == S.labels and T.table == S.table and T.zero == S.zero


@pytest.mark.parametrize("text,line", [
    ("a b\n", None),
    ("a b\nx\na a\nb b\n", 2),
    ("a b\na\na a\n", 3),
    ("a b\n# comment\na\na a\nb q\n", 5),
    ("a b\na\na a b\nb b\n", 3),
])
def test_semigroup_format_errors(text, line):
    with pytest.raises(FormatError) as ei:
        parse_semigroup(text)
    assert ei.value.line == line


def test_action_file_round_trip(corpus, tmp_path):
    for name, A in corpus[::9]:
        ref = name.split("/")[0]
        text = format_action(A, ref)
        B = parse_action(text)
        assert B.points == A.points and B.maps == A.maps
        assert format_action(B, ref) == text


def test_action_file_closure(tmp_path):
    (tmp_path / "g.sg").write_text(format_semigroup(adjoin_zero(cyclic_group(3))), encoding="utf-8")
    p = tmp_path / "x.act"
    p.write_text("semigroup: g.sg\npoints: a b c\ng: a->b, b->c, c->a\n", encoding="utf-8")
    A = read_action(p)
    assert validate_action(A).ok
    assert A.maps[A.semigroup.index("1")] == PartialBijection.identity({0, 1, 2})


@pytest.mark.parametrize("text,line", [
    ("points: a\nsemigroup: I2\n", 1),
    ("semigroup: I2\nfoo\n", 2),
    ("semigroup: I2\npoints: a a\n", 2),
    ("semigroup: I2\npoints: a b\n12: a->a, b->b\nqq: a->b\n", 4),
    ("semigroup: I2\npoints: a b\n\n12: a->c\n", 4),
    ("semigroup: I2\npoints: a b\n12 a->a\n", 3),
    ("semigroup: I2\npoints: a b\n21: a->b, b->b\n", 3),
    ("semigroup: I2\npoints: a b\n12: a->a\n12: b->b\n", 4),
])
def test_action_format_errors(text, line):
    with pytest.raises(FormatError) as ei:
        parse_action(text)
    assert ei.value.line == line
    assert f"{line}:" in str(ei.value)


def test_action_file_missing_generators():
    with pytest.raises(FormatError):
        parse_action("semigroup: I2\npoints: a b\n1-: a->a\n")


def test_shipped_data_in_sync():
    for name, text in data.generate().items():
        assert data.path(name).read_text(encoding="utf-8") == text, name


def test_shipped_files_load():
    for name in data.SEMIGROUPS:
        read_semigroup(data.path(name))
    for name in data.ACTIONS:
        assert validate_action(read_action(data.path(name))).ok

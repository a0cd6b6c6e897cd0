import itertools
from functools import reduce

import pytest

from germbench.action import validate_action
from germbench.corpus import named_semigroup
from germbench.errors import DomainViolation
from germbench.semigroup import adjoin_zero, cyclic_group, double_zero_example, symmetric_inverse_monoid
from germbench.spectrum import (
    basis_set,
    canonical_action,
    enumerate_filters,
    filters_by_subsets,
    is_filter,
    theta_apply,
    tight_spectrum,
    ultrafilters,
    up_set,
)
from oracles import filters_brute


def named(S, *labels):
    return frozenset(S.index(x) for x in labels)


def theta_brute(S, s, xi):
    """{e : s f s* ≤ e for some f ∈ ξ} written out directly."""
    out = set()
    for e in S.idempotents:
        for f in xi:
            sfs = S.prod(s, f, S.inv[s])
            if S.mul(sfs, e) == sfs:
                out.add(e)
                break
    return frozenset(out)


@pytest.fixture(scope="module")
def dz2():
    return double_zero_example(cyclic_group(2))


@pytest.fixture(scope="module")
def i2():
    return symmetric_inverse_monoid(2)


def test_is_filter_examples(dz2, i2):
    assert is_filter(dz2, named(dz2, "1", "0"))
    assert not is_filter(dz2, named(dz2, "0'"))
    assert not is_filter(dz2, frozenset())
    e1 = i2.index("1-")
    assert not is_filter(i2, {e1})  # 1- < 12, so {1-} is not up-closed


def test_double_zero_spectrum(dz2):
    spec = enumerate_filters(dz2)
    assert set(spec) == {named(dz2, "1", "0"), named(dz2, "1")}
    assert ultrafilters(dz2, spec) == (named(dz2, "1", "0"),)
    assert tight_spectrum(dz2, spec) == (named(dz2, "1", "0"),)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_group_with_zero_has_one_filter(n):
    S = adjoin_zero(cyclic_group(n))
    spec = enumerate_filters(S)
    assert list(spec) == [named(S, "1")]
    assert ultrafilters(S) == tight_spectrum(S) == (named(S, "1"),)


def test_i2_filters(i2):
    spec = enumerate_filters(i2)
    assert set(spec) == {named(i2, "1-", "12"), named(i2, "-2", "12"), named(i2, "12")}
    assert set(ultrafilters(i2, spec)) == {named(i2, "1-", "12"), named(i2, "-2", "12")}
    assert set(tight_spectrum(i2, spec)) == set(ultrafilters(i2, spec))


def test_filter_enumeration_matches_brute_force(small_semigroup):
    _, S = small_semigroup
    fast = set(enumerate_filters(S))
    assert fast == set(filters_by_subsets(S))
    assert fast == filters_brute(S.idempotents, S.mul, S.zero)
    assert set(enumerate_filters(S, crosscheck=True)) == fast
    for xi in fast:
        assert is_filter(S, xi)
        m = reduce(S.mul, sorted(xi))
        assert m != S.zero and S.is_idempotent(m)
        assert xi == up_set(S, m)


def test_tight_spectrum_contains_ultrafilters(small_semigroup):
    _, S = small_semigroup
    spec = enumerate_filters(S)
    tight = set(tight_spectrum(S, spec))
    assert tight <= set(spec)
    for xi in spec:
        maximal = not any(xi < eta for eta in spec)
        assert (xi in tight) == maximal


def test_basis_sets(dz2, i2):
    spec = enumerate_filters(dz2)
    assert set(basis_set(spec)) == set(spec)
    z = dz2.index("0")
    assert basis_set(spec, [z]) == (named(dz2, "1", "0"),)
    spec2 = enumerate_filters(i2)
    for e in i2.idempotents:
        assert set(basis_set(spec2, [e])) == {xi for xi in spec2 if e in xi}
    a, b = i2.index("1-"), i2.index("-2")
    assert basis_set(spec2, [i2.index("12")], [a, b]) == (named(i2, "12"),)


def test_basis_sets_separate_points(small_semigroup):
    _, S = small_semigroup
    spec = enumerate_filters(S)
    for xi, eta in itertools.combinations(spec, 2):
        assert any((xi in basis_set(spec, [e])) != (eta in basis_set(spec, [e])) for e in S.idempotents)


def test_theta_examples(dz2, i2):
    xi = named(dz2, "1", "0")
    for e in xi:
        assert theta_apply(dz2, e, xi) == xi
    assert theta_apply(dz2, dz2.index("g"), xi) == xi
    with pytest.raises(DomainViolation):
        theta_apply(dz2, dz2.index("0'"), xi)
    spec = enumerate_filters(i2)
    for s in i2.elements:
        for eta in spec:
            if i2.source_idempotent(s) in eta:
                assert theta_apply(i2, s, eta) == theta_brute(i2, s, eta)


def test_theta_functorial(small_semigroup):
    _, S = small_semigroup
    spec = enumerate_filters(S)
    for s, t in itertools.product(S.elements, repeat=2):
        st = S.mul(s, t)
        for xi in spec:
            if S.source_idempotent(t) not in xi:
                continue
            mid = theta_apply(S, t, xi)
            if S.source_idempotent(s) not in mid:
                assert S.source_idempotent(st) not in xi
                continue
            assert S.source_idempotent(st) in xi
            assert theta_apply(S, s, mid) == theta_apply(S, st, xi)


def test_canonical_action(small_semigroup):
    _, S = small_semigroup
    spec = enumerate_filters(S)
    theta = canonical_action(S, spec)
    assert validate_action(theta).ok
    assert not theta.maps[S.zero]
    covered = set().union(*(f.domain for f in theta.maps))
    assert covered == set(range(len(spec)))
    for s in S.elements:
        for p, xi in enumerate(spec):
            if theta.in_domain(s, p):
                assert spec.filters[theta(s, p)] == theta_brute(S, s, xi)


def test_brute_force_guard():
    S = named_semigroup("I4")
    assert len(S.idempotents) == 16
    assert len(filters_by_subsets(S)) == len(enumerate_filters(S))

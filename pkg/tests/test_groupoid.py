import itertools
import json
import random

import pytest

from germbench import groupoid as gmod
from germbench.action import build_germ_groupoid
from germbench.errors import FormatError, NotAHomomorphism, NotAUnit
from germbench.groupoid import (
    FiniteGroupoid,
    GroupoidHom,
    check_axioms,
    group_groupoid,
    is_d_bijective,
    is_homomorphism,
    is_r_bijective,
    pair_groupoid,
)
from fuzz import corrupt, mutate_hom
from oracles import groupoid_ok


def zmod(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def s3():
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    return [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]


def identity(G):
    return GroupoidHom(G, G, tuple(G.arrows))


@pytest.fixture(scope="module")
def groupoids(corpus):
    out = [group_groupoid([[0]]), group_groupoid(zmod(4)), group_groupoid(s3()), pair_groupoid(3)]
    out += [build_germ_groupoid(A) for _, A in corpus[::7]]
    return out


def test_small_valid_groupoids(groupoids):
    for G in groupoids:
        assert check_axioms(G).ok
        assert groupoid_ok(G.n_arrows, G.product, G.inverse)


def test_one_point_and_group():
    G = group_groupoid([[0]])
    assert G.units == (0,)
    H = group_groupoid(s3())
    assert H.units == (0,)
    assert H.d_fiber(0) == tuple(H.arrows) == H.r_fiber(0)
    assert len(H.isotropy(0)) == 6


def test_units_are_idempotent_arrows(groupoids):
    for G in groupoids:
        idem = {u for u in G.arrows if (u, u) in G.product and G.product[(u, u)] == u}
        assert set(G.units) == idem


def test_fibers(groupoids):
    for G in groupoids:
        seen_d, seen_r = [], []
        for x in G.units:
            dx, rx = G.d_fiber(x), G.r_fiber(x)
            assert {G.inv(g) for g in dx} == set(rx)
            seen_d += dx
            seen_r += rx
        assert sorted(seen_d) == sorted(seen_r) == list(G.arrows)


def test_fiber_of_non_unit():
    G = pair_groupoid(2)
    non_unit = next(g for g in G.arrows if not G.is_unit(g))
    with pytest.raises(NotAUnit):
        G.d_fiber(non_unit)


def test_corrupted_entry_has_associativity_witness():
    G = group_groupoid(zmod(5))
    rng = random.Random(1)
    for _ in range(50):
        _, bad = corrupt(G, rng, "value")
        kinds = {k for k, _ in check_axioms(bad).violations}
        assert kinds & {"associativity", "associativity-composable"}


def test_check_axioms_agrees_with_oracle(groupoids):
    rng = random.Random(7)
    for G in groupoids:
        if G.n_arrows < 2:
            continue
        for _ in range(40):
            _, bad = corrupt(G, rng)
            assert check_axioms(bad).ok == groupoid_ok(bad.n_arrows, bad.product, bad.inverse)
            assert not check_axioms(bad).ok


def test_structural_garbage_reported():
    G = FiniteGroupoid(2, {(0, 0): 5}, [0, 1])
    assert not check_axioms(G).ok
    G = FiniteGroupoid(2, {(0, 0): 0}, [0])
    assert check_axioms(G).violations[0][0] == "inverse-total"


# -- homomorphisms --------------------------------------------------------

def test_identity_homomorphism(groupoids):
    for G in groupoids:
        h = identity(G)
        assert is_homomorphism(h) and is_d_bijective(h) and is_r_bijective(h)


def test_constant_to_unit_not_bijective():
    G = group_groupoid(zmod(3))
    h = GroupoidHom(G, G, (0, 0, 0))
    assert is_homomorphism(h)
    assert not is_d_bijective(h) and not is_r_bijective(h)


def test_wrong_fiber_not_homomorphism():
    G = pair_groupoid(2)
    phi = list(G.arrows)
    a = next(g for g in G.arrows if not G.is_unit(g))
    phi[a] = G.inv(a)
    h = GroupoidHom(G, G, tuple(phi))
    assert not is_homomorphism(h)
    with pytest.raises(NotAHomomorphism):
        is_d_bijective(h)


def test_collapse_onto_group_is_d_bijective_and_r_bijective():
    # (i, j) -> i - j mod 2; every fiber has two arrows and they land on 0 and 1
    G = pair_groupoid(2)
    H = group_groupoid(zmod(2))
    phi = tuple(0 if i == j else 1 for i in range(2) for j in range(2))
    h = GroupoidHom(G, H, phi)
    assert is_homomorphism(h)
    assert is_d_bijective(h)
    assert is_r_bijective(h)


def test_mutations_fail(groupoids):
    rng = random.Random(3)
    for G in groupoids:
        for _ in range(5):
            m = mutate_hom(identity(G), rng)
            if m is None:
                continue
            if is_homomorphism(m):
                assert not is_d_bijective(m) and not is_r_bijective(m)


# -- export ---------------------------------------------------------------

def test_json_round_trip(groupoids):
    for G in groupoids:
        text = gmod.dumps(G)
        H = gmod.loads(text)
        assert H.n_arrows == G.n_arrows
        assert H.product == G.product
        assert H.inverse == G.inverse
        assert H.labels == G.labels
        assert gmod.dumps(H) == text


def test_json_rejects_invalid():
    G = pair_groupoid(2)
    data = gmod.to_json_dict(G)
    data["product"][0][2] = (data["product"][0][2] + 1) % G.n_arrows
    with pytest.raises(FormatError):
        gmod.from_json_dict(data)
    data = gmod.to_json_dict(G)
    data["arrows"][1]["src"] = 99
    with pytest.raises(FormatError):
        gmod.from_json_dict(data)
    with pytest.raises(FormatError) as ei:
        gmod.loads('{\n "arrows": [,\n')
    assert ei.value.line == 2
    with pytest.raises(FormatError):
        gmod.loads(json.dumps({"arrows": [{"id": 1, "inverse": 0}], "product": []}))


def test_dot_export():
    G = pair_groupoid(3)
    dot = gmod.to_dot(G)
    assert dot.startswith("digraph G {")
    assert dot.count("->") == G.n_arrows - len(G.units)
    assert dot.count("[label=") == G.n_arrows

"""Corruptions of groupoid tables and homomorphisms for fuzz and mutation tests."""

from germbench.groupoid import FiniteGroupoid, GroupoidHom

KINDS = ("value", "delete", "insert", "inverse")


def corrupt(G: FiniteGroupoid, rng, kind=None):
    """Return (kind, corrupted copy) with exactly one table entry changed."""
    n = G.n_arrows
    product = dict(G.product)
    inverse = list(G.inverse)
    kind = kind or rng.choice(KINDS)
    missing = [(g, h) for g in range(n) for h in range(n) if (g, h) not in product] if kind == "insert" else []
    if kind == "insert" and not missing:
        kind = "value"
    if kind == "value":
        key = rng.choice(sorted(product))
        product[key] = rng.choice([v for v in range(n) if v != product[key]])
    elif kind == "delete":
        del product[rng.choice(sorted(product))]
    elif kind == "insert":
        product[rng.choice(missing)] = rng.randrange(n)
    else:
        g = rng.randrange(n)
        inverse[g] = rng.choice([v for v in range(n) if v != inverse[g]])
    return kind, FiniteGroupoid(n, product, inverse, G.labels)


def mutate_hom(h: GroupoidHom, rng):
    """A map that is provably not a d-bijective homomorphism, or None.

    Either two arrows of one source fiber are sent to the same place, or a
    unit is sent to a non-unit (never idempotent, so not multiplicative).
    """
    G, H = h.source, h.target
    phi = list(h.arrow_map)
    fibers = [G.d_fiber(x) for x in G.units if len(G.d_fiber(x)) >= 2]
    non_units = [a for a in H.arrows if not H.is_unit(a)]
    options = []
    if fibers:
        options.append("collide")
    if non_units:
        options.append("unit-to-arrow")
    if not options:
        return None
    if rng.choice(options) == "collide":
        fib = rng.choice(fibers)
        a, b = rng.sample(list(fib), 2)
        phi[a] = phi[b]
    else:
        u = rng.choice(G.units)
        phi[u] = rng.choice(non_units)
    return GroupoidHom(G, H, tuple(phi))

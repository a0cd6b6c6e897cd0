"""Shipped semigroup tables and action files.

The files here are generated by :func:`generate`; the test suite checks that
they are still in sync with the builders.
"""

from __future__ import annotations

from pathlib import Path

HERE = Path(__file__).resolve().parent

SEMIGROUPS = {
    "i1.sg": ("I1", "symmetric inverse monoid on one point"),
    "i2.sg": ("I2", "symmetric inverse monoid on two points; labels are image words, '-' = undefined"),
    "i3.sg": ("I3", "symmetric inverse monoid on three points"),
    "b2.sg": ("B2", "Brandt semigroup B2 (rank <= 1 part of I(2))"),
    "chain3.sg": ("chain3", "chain 0 < e1 < e2 < e3"),
    "z2_zero.sg": ("Z2-zero", "Z/2 with a zero adjoined"),
    "double_zero_z2.sg": ("double-zero-Z2", "Z/2 with zeros 0 and 0' adjoined"),
    "double_zero_z3.sg": ("double-zero-Z3", "Z/3 with zeros 0 and 0' adjoined"),
    "double_zero_z4.sg": ("double-zero-Z4", "Z/4 with zeros 0 and 0' adjoined"),
    "double_zero_z5.sg": ("double-zero-Z5", "Z/5 with zeros 0 and 0' adjoined"),
}

ACTIONS = {
    "i2_natural.act": "i2.sg",
    "b2_natural.act": "b2.sg",
    "z2_zero_point.act": "z2_zero.sg",
    "double_zero_z3_canonical.act": "double_zero_z3.sg",
}


def path(name: str) -> Path:
    return HERE / name


def generate() -> dict[str, str]:
    from ..action import Action, format_action, natural_action
    from ..corpus import named_semigroup
    from ..partial import EMPTY, PartialBijection
    from ..semigroup import format_semigroup
    from ..spectrum import canonical_action

    out = {}
    built = {}
    for fname, (name, comment) in SEMIGROUPS.items():
        S = named_semigroup(name)
        built[fname] = S
        out[fname] = format_semigroup(S, comment)
    out["i2_natural.act"] = format_action(natural_action(built["i2.sg"]), "i2.sg")
    out["b2_natural.act"] = format_action(natural_action(built["b2.sg"]), "b2.sg")
    G0 = built["z2_zero.sg"]
    point = PartialBijection(((0, 0),))
    out["z2_zero_point.act"] = format_action(
        Action(G0, ("x",), tuple(EMPTY if s == G0.zero else point for s in G0.elements)), "z2_zero.sg"
    )
    out["double_zero_z3_canonical.act"] = format_action(canonical_action(built["double_zero_z3.sg"]), "double_zero_z3.sg")
    return out


def write_all(target: Path = HERE) -> None:
    for fname, text in generate().items():
        (target / fname).write_text(text, encoding="utf-8")


if __name__ == "__main__":
    write_all()

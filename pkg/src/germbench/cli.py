"""Command-line entry point.

Exit codes: 0 when every report passes, 1 when a report fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import data
from . import groupoid as gmod
from .action import build_germ_groupoid, format_action, read_action
from .certificate import (
    check_certificate,
    dumps_certificate,
    loads_certificate,
    uniform_certificate,
    verify_amenability_transfer,
)
from .corpus import named_semigroup, random_action, sample_corpus
from .errors import GermbenchError, InvalidAction, WellDefinednessFailure
from .rho import preimage_failures, rho_bundle, rho_table, verify_rhofacts
from .semigroup import MAX_SEMIGROUP_SIZE, InverseSemigroup, cyclic_group, double_zero_example, format_semigroup, read_semigroup
from .spectrum import (
    canonical_action,
    enumerate_filters,
    filter_labels,
    tight_action,
    tight_spectrum,
    ultrafilters,
)

log = logging.getLogger("germbench")

EXAMPLES = ("double-zero", "remark-3.5")


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False)


def load_semigroup(ref: str, max_size: int = MAX_SEMIGROUP_SIZE) -> InverseSemigroup:
    p = Path(ref)
    if p.is_file():
        return read_semigroup(p, max_size=max_size)
    if data.path(ref).is_file():
        return read_semigroup(data.path(ref), max_size=max_size)
    try:
        return named_semigroup(ref)
    except KeyError:
        raise GermbenchError(f"{ref!r} is neither a semigroup file nor a builtin name") from None


def _set_text(S, members) -> str:
    return "{" + ", ".join(filter_labels(S, members)) + "}"


# -- subcommands ----------------------------------------------------------

def cmd_build(args) -> int:
    S = load_semigroup(args.semigroup, args.max_size)
    if args.json:
        print(_dump({
            "size": len(S),
            "zero": S.zero_label,
            "labels": list(S.labels),
            "idempotents": [S.label(e) for e in S.idempotents],
            "inverse": {S.label(s): S.label(S.inv[s]) for s in S.elements},
            "valid": True,
        }))
    else:
        print(f"|S| = {len(S)}  zero = {S.zero_label}")
        print("idempotents: " + " ".join(S.label(e) for e in S.idempotents))
        print("inverses:    " + " ".join(f"{S.label(s)}*={S.label(S.inv[s])}" for s in S.elements))
        print("valid inverse semigroup")
    return 0


def cmd_spectrum(args) -> int:
    S = load_semigroup(args.semigroup, args.max_size)
    spec = enumerate_filters(S)
    chosen = {
        "filters": spec.filters,
        "ultrafilters": ultrafilters(S, spec),
        "tight": tight_spectrum(S, spec),
    }[args.which]
    if args.json:
        print(_dump([filter_labels(S, xi) for xi in chosen]))
    else:
        for xi in chosen:
            print(_set_text(S, xi))
    return 0


def cmd_germs(args) -> int:
    A = read_action(args.action)
    G = build_germ_groupoid(A)
    if args.json:
        print(gmod.dumps(G), end="")
    elif args.dot:
        print(gmod.to_dot(G), end="")
    else:
        print(f"{G.n_arrows} arrows, {len(G.units)} units")
        for g in G.arrows:
            tag = " (unit)" if G.is_unit(g) else ""
            print(f"{g:4d} {G.labels[g]}: {G.labels[G.d(g)]} -> {G.labels[G.r(g)]}  inverse {G.inv(g)}{tag}")
    return 0


def cmd_rho(args) -> int:
    A = read_action(args.action)
    out = {}
    status = 0
    facts = verify_rhofacts(A) if args.verify else None
    try:
        b = rho_bundle(A)
    except (InvalidAction, WellDefinednessFailure) as exc:
        # without --verify a broken action is plain bad input
        if facts is None:
            raise
        b = None
        out["error"] = str(exc)
    if b is not None:
        out["rho"] = {p: f for p, f in rho_table(b)}
        out["rho_tilde"] = {b.source.labels[g]: b.target.labels[h] for g, h in enumerate(b.hom.arrow_map)}
    if facts is not None:
        pre = preimage_failures(b) if b is not None else []
        ok = facts.ok and not pre and b is not None
        out["verify"] = {
            "violations": [[k, list(map(str, w))] for k, w in facts.violations],
            "checked": {str(k): v for k, v in facts.checked.items()},
            "preimage_failures": [list(map(str, f)) for f in pre],
            "ok": ok,
        }
        status = 0 if ok else 1
    if args.json:
        print(_dump(out))
        return status
    if "error" in out:
        print(f"error: {out['error']}")
    for p, f in out.get("rho", {}).items():
        print(f"rho({p}) = {f}")
    for g, h in out.get("rho_tilde", {}).items():
        print(f"{g} -> {h}")
    if facts is not None:
        v = out["verify"]
        counts = ", ".join(f"fact {k}: {n} checks" for k, n in v["checked"].items())
        print(f"verify: {'ok' if v['ok'] else 'FAIL'} ({counts})")
        for k, w in v["violations"]:
            print(f"  fact {k} fails at {' '.join(w)}")
        for f in v["preimage_failures"]:
            print(f"  preimage mismatch {' '.join(f)}")
    return status


def cmd_check(args) -> int:
    G = gmod.loads(Path(args.groupoid).read_text(encoding="utf-8"))
    c = loads_certificate(Path(args.certificate).read_text(encoding="utf-8"), G.n_arrows)
    rep = check_certificate(G, c, args.tol, bound=args.bound)
    print(_dump(rep.to_json_dict()) if args.json else rep.text())
    return 0 if rep.verdict else 1


def _transfer_text(tr) -> str:
    lines = [f"{name:18s} {'pass' if ok else 'FAIL'}" for name, ok in tr.stages.items()]
    if "arrows" in tr.details:
        a, u = tr.details["arrows"], tr.details["units"]
        lines.append(f"G(alpha): {a['alpha']} arrows, {u['alpha']} units; G(theta): {a['theta']} arrows, {u['theta']} units")
    lines.append(f"verdict            {'pass' if tr.verdict else 'fail'}")
    return "\n".join(lines)


def cmd_theorem(args) -> int:
    A = read_action(args.action)
    cert = None
    if args.cert:
        n = build_germ_groupoid(canonical_action(A.semigroup)).n_arrows
        cert = loads_certificate(Path(args.cert).read_text(encoding="utf-8"), n)
    tr = verify_amenability_transfer(A, cert, eq_tol=args.tol)
    if args.figures:
        from .report import write_transfer_artifacts

        for p in write_transfer_artifacts(tr, args.figures):
            log.info("wrote %s", p)
    print(_dump(tr.to_json_dict()) if args.json else _transfer_text(tr))
    return 0 if tr.verdict else 1


def double_zero_walkthrough(order: int) -> dict:
    """Counts for the doubled-zero semigroup built from Z/order."""
    G = cyclic_group(order)
    S = double_zero_example(G)
    spec = enumerate_filters(S)
    ultra = ultrafilters(S, spec)
    tight = tight_spectrum(S, spec)
    U = build_germ_groupoid(canonical_action(S, spec))
    T = build_germ_groupoid(tight_action(S, spec))

    one = S.index("1")
    eta = next(i for i, xi in enumerate(spec) if xi == frozenset({one}))
    unit = U.unit_of_point[eta]
    iso = U.isotropy(unit)
    # g -> [g, η] must be a group isomorphism G -> isotropy at η
    image = [U.germ(g, eta) for g in range(len(G))]
    iso_ok = sorted(image) == sorted(iso) and all(
        U.mul(image[a], image[b]) == image[G.mul(a, b)] for a in range(len(G)) for b in range(len(G))
    )
    xi_pt = spec.index({one, S.index("0")})
    collapsed = len(U.fiber_at_point(xi_pt)) == 1
    tr = verify_amenability_transfer(canonical_action(S, spec))
    return {
        "group_order": order,
        "semigroup_size": len(S),
        "idempotents": [S.label(e) for e in S.idempotents],
        "spectrum": [filter_labels(S, xi) for xi in spec],
        "ultrafilters": [filter_labels(S, xi) for xi in ultra],
        "tight_spectrum": [filter_labels(S, xi) for xi in tight],
        "tight_groupoid": {"arrows": T.n_arrows, "units": len(T.units)},
        "universal_groupoid": {"arrows": U.n_arrows, "units": len(U.units)},
        "isotropy_at_eta": {"arrows": len(iso), "isomorphic_to_group": iso_ok},
        "germs_collapse_at_xi": collapsed,
        "transfer_verdict": "pass" if tr.verdict else "fail",
    }


def cmd_example(args) -> int:
    if args.name not in EXAMPLES:
        raise GermbenchError(f"unknown example {args.name!r}; choose from {', '.join(EXAMPLES)}")
    out = double_zero_walkthrough(args.group)
    ok = (
        len(out["spectrum"]) == 2
        and len(out["tight_spectrum"]) == 1
        and out["tight_groupoid"] == {"arrows": 1, "units": 1}
        and out["universal_groupoid"] == {"arrows": args.group + 1, "units": 2}
        and out["isotropy_at_eta"]["isomorphic_to_group"]
        and out["transfer_verdict"] == "pass"
    )
    if args.outdir:
        _write_example_artifacts(args.group, Path(args.outdir))
    if args.json:
        print(_dump(out))
        return 0 if ok else 1

    def sets(key):
        return " ".join("{" + ", ".join(f) + "}" for f in out[key])

    print(f"semigroup: Z/{args.group} with zeros 0 and 0' adjoined, |S| = {out['semigroup_size']}")
    print("idempotents: " + " ".join(out["idempotents"]))
    print(f"|E^| = {len(out['spectrum'])}: {sets('spectrum')}")
    print(f"ultrafilters: {sets('ultrafilters')}")
    print(f"|E^tight| = {len(out['tight_spectrum'])}: {sets('tight_spectrum')}")
    print(f"tight groupoid arrow count = {out['tight_groupoid']['arrows']} (units {out['tight_groupoid']['units']})")
    print(f"universal groupoid arrow count = {out['universal_groupoid']['arrows']} (units {out['universal_groupoid']['units']})")
    iso = out["isotropy_at_eta"]
    print(f"isotropy at {{1}}: {iso['arrows']} arrows, isomorphic to Z/{args.group}: {'yes' if iso['isomorphic_to_group'] else 'no'}")
    print(f"germs at {{1, 0}} all identified: {'yes' if out['germs_collapse_at_xi'] else 'no'}")
    print(f"certificate transfer on the canonical action: {out['transfer_verdict']}")
    return 0 if ok else 1


def _write_example_artifacts(order: int, outdir: Path):
    from .report import plot_groupoid, write_transfer_artifacts

    outdir.mkdir(parents=True, exist_ok=True)
    S = double_zero_example(cyclic_group(order))
    (outdir / "semigroup.sg").write_text(format_semigroup(S, f"Z/{order} with zeros 0 and 0' adjoined"), encoding="utf-8")
    theta = canonical_action(S)
    (outdir / "canonical.act").write_text(format_action(theta, "semigroup.sg"), encoding="utf-8")
    U = build_germ_groupoid(theta)
    T = build_germ_groupoid(tight_action(S))
    (outdir / "universal.json").write_text(gmod.dumps(U), encoding="utf-8")
    (outdir / "universal.dot").write_text(gmod.to_dot(U), encoding="utf-8")
    (outdir / "tight.json").write_text(gmod.dumps(T), encoding="utf-8")
    (outdir / "uniform_certificate.json").write_text(dumps_certificate(uniform_certificate(U)), encoding="utf-8")
    plot_groupoid(T, outdir / "groupoid_tight.png", "tight groupoid")
    tr = verify_amenability_transfer(theta)
    (outdir / "transfer.json").write_text(_dump(tr.to_json_dict()) + "\n", encoding="utf-8")
    write_transfer_artifacts(tr, outdir)


def cmd_sample(args) -> int:
    import random

    S = load_semigroup(args.semigroup)
    A = random_action(S, random.Random(args.seed), args.points)
    print(format_action(A, args.semigroup), end="")
    return 0


def cmd_corpus(args) -> int:
    rows = []
    for name, A in sample_corpus(args.seed, args.count, args.points):
        tr = verify_amenability_transfer(A, eq_tol=args.tol)
        facts = verify_rhofacts(A)
        rows.append({
            "name": name,
            "points": len(A.points),
            "arrows": tr.details.get("arrows", {}),
            "rhofacts": facts.ok,
            "transfer": "pass" if tr.verdict else "fail",
        })
    ok = all(r["rhofacts"] and r["transfer"] == "pass" for r in rows)
    if args.json:
        print(_dump({"seed": args.seed, "actions": rows, "verdict": "pass" if ok else "fail"}))
    else:
        for r in rows:
            a = r["arrows"]
            print(f"{r['name']:28s} |X|={r['points']}  |G(alpha)|={a.get('alpha')}  |G(theta)|={a.get('theta')}  "
                  f"facts={'ok' if r['rhofacts'] else 'FAIL'}  transfer={r['transfer']}")
        print(f"{len(rows)} actions, verdict {'pass' if ok else 'fail'}")
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="germbench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, dot=False):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--json", action="store_true", help="machine-readable output")
        if dot:
            g.add_argument("--dot", action="store_true", help="Graphviz output")

    sp = sub.add_parser("build", help="validate a semigroup table")
    sp.add_argument("semigroup", help="table file or builtin name (I2, B2, double-zero-Z3, ...)")
    sp.add_argument("--max-size", type=int, default=MAX_SEMIGROUP_SIZE)
    fmt(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("spectrum", help="filters, ultrafilters or tight spectrum")
    sp.add_argument("semigroup")
    sp.add_argument("--which", choices=("filters", "ultrafilters", "tight"), default="filters")
    sp.add_argument("--max-size", type=int, default=MAX_SEMIGROUP_SIZE)
    fmt(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("germs", help="groupoid of germs of an action file")
    sp.add_argument("action")
    fmt(sp, dot=True)
    sp.set_defaults(func=cmd_germs)

    sp = sub.add_parser("rho", help="the maps rho and rho-tilde of an action")
    sp.add_argument("action")
    sp.add_argument("--verify", action="store_true", help="check the rho facts; exit 1 on any witness")
    fmt(sp)
    sp.set_defaults(func=cmd_rho)

    sp = sub.add_parser("check", help="check a certificate against a groupoid JSON file")
    sp.add_argument("groupoid")
    sp.add_argument("certificate")
    sp.add_argument("--tol", type=float, default=None, help="equality tolerance (default 0 exact, 1e-12 float)")
    sp.add_argument("--bound", type=float, default=float("inf"), help="pass threshold for condition (a)")
    fmt(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("theorem", help="pull a certificate on G(theta) back to G(alpha)")
    sp.add_argument("action")
    sp.add_argument("--cert", help="certificate JSON on G(theta) arrow ids (default: uniform)")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--figures", metavar="DIR", help="write figures and fibers.tsv here")
    fmt(sp)
    sp.set_defaults(func=cmd_theorem)

    sp = sub.add_parser("example", help="packaged scenarios")
    sp.add_argument("name", choices=EXAMPLES)
    sp.add_argument("--group", type=int, default=2, help="order of the cyclic group G")
    sp.add_argument("--outdir", help="write tables, exports and figures here")
    fmt(sp)
    sp.set_defaults(func=cmd_example)

    sp = sub.add_parser("sample", help="print a seeded random action file")
    sp.add_argument("semigroup")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=int, default=5)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("corpus", help="run the rho checks and transfer over a seeded corpus")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20, help="random actions per semigroup")
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--tol", type=float, default=None)
    fmt(sp)
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (GermbenchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Approximate-invariance certificates on finite groupoids.

A certificate is a finite sequence of functions on arrows. In the r-form the
functions are normalised over range fibers G^x and the invariance defect at γ
is Σ_{η ∈ G^{r(γ)}} |g(γ⁻¹η) - g(η)|; in the d-form they are normalised over
source fibers G_x and the defect is Σ_{η ∈ G_{d(γ)}} |f(ηγ⁻¹) - f(η)|.
"Converges to 0" cannot be observed on a finite prefix, so condition (c) is
read as: defects nonincreasing (within eq_tol) and the last one at most the
last entry of the tolerance schedule.

Values may be floats or :class:`fractions.Fraction`. When every value is
exact the default tolerance is 0 and all comparisons are equalities.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

from .action import Action, validate_action
from .errors import FormatError, NotAHomomorphism, NotDBijective, TotalityViolation
from .groupoid import FiniteGroupoid, GroupoidHom, check_axioms, d_bijectivity_failures, is_homomorphism

DEFAULT_EQ_TOL = 1e-12
ORIENTATIONS = ("r", "d")


@dataclass(frozen=True)
class Certificate:
    orientation: str
    functions: tuple[tuple, ...]
    tolerance_schedule: tuple = (0,)

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be 'r' or 'd', got {self.orientation!r}")
        funcs = tuple(tuple(f) for f in self.functions)
        sched = tuple(self.tolerance_schedule)
        if not funcs:
            raise ValueError("a certificate needs at least one function")
        if len(sched) != len(funcs):
            raise ValueError(f"{len(sched)} tolerances for {len(funcs)} functions")
        if any(e < 0 for e in sched) or any(b > a for a, b in zip(sched, sched[1:])):
            raise ValueError("tolerance schedule must be nonnegative and nonincreasing")
        object.__setattr__(self, "functions", funcs)
        object.__setattr__(self, "tolerance_schedule", sched)

    def __len__(self):
        return len(self.functions)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for f in self.functions for v in f)


def _fibers(G: FiniteGroupoid, orientation: str):
    return G.r_fiber if orientation == "r" else G.d_fiber


def _arrow_defect(G: FiniteGroupoid, orientation: str, f: Sequence, g: int):
    gi = G.inv(g)
    if orientation == "r":
        return sum(abs(f[G.mul(gi, eta)] - f[eta]) for eta in G.r_fiber(G.r(g)))
    return sum(abs(f[G.mul(eta, gi)] - f[eta]) for eta in G.d_fiber(G.d(g)))


@dataclass
class CheckReport:
    orientation: str
    exact: bool
    eq_tol: float
    bound_a: object
    bound_ok: bool
    cond_b_ok: bool
    cond_b_witnesses: list[tuple[int, int, object]]  # (n, unit, fiber sum) where (b) fails
    cond_b_worst: tuple[int, int, object]  # (n, unit, |sum - 1|)
    defects: list  # per n, sup over arrows
    defect_witnesses: list[int]  # per n, an arrow attaining the sup
    cond_c_ok: bool
    unit_sums: list[dict[int, object]] = field(repr=False)
    arrow_defects: list[list] = field(repr=False)

    @property
    def verdict(self) -> bool:
        return self.bound_ok and self.cond_b_ok and self.cond_c_ok

    def to_json_dict(self) -> dict:
        return {
            "orientation": self.orientation,
            "exact": self.exact,
            "eq_tol": _num(self.eq_tol),
            "bound_a": _num(self.bound_a),
            "bound_ok": self.bound_ok,
            "cond_b_ok": self.cond_b_ok,
            "cond_b_witnesses": [[n, x, _num(v)] for n, x, v in self.cond_b_witnesses],
            "cond_b_worst": [self.cond_b_worst[0], self.cond_b_worst[1], _num(self.cond_b_worst[2])],
            "defects": [_num(v) for v in self.defects],
            "defect_witnesses": list(self.defect_witnesses),
            "cond_c_ok": self.cond_c_ok,
            "verdict": "pass" if self.verdict else "fail",
        }

    def text(self) -> str:
        lines = [
            f"orientation      {self.orientation}-form ({'exact' if self.exact else 'float'}, eq_tol={self.eq_tol})",
            f"(a) bound        {_fmt(self.bound_a)}  {'ok' if self.bound_ok else 'FAIL'}",
            f"(b) fiber sums   {'ok' if self.cond_b_ok else 'FAIL'}  worst n={self.cond_b_worst[0]} unit={self.cond_b_worst[1]} dev={_fmt(self.cond_b_worst[2])}",
        ]
        for n, x, v in self.cond_b_witnesses[:10]:
            lines.append(f"    n={n} unit={x} sum={_fmt(v)}")
        if len(self.cond_b_witnesses) > 10:
            lines.append(f"    ... {len(self.cond_b_witnesses) - 10} more")
        lines.append(
            f"(c) defects      {'ok' if self.cond_c_ok else 'FAIL'}  "
            + " ".join(f"{_fmt(v)}@{w}" for v, w in zip(self.defects, self.defect_witnesses))
        )
        lines.append(f"verdict          {'pass' if self.verdict else 'fail'}")
        return "\n".join(lines)


def _num(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _fmt(v) -> str:
    return str(v) if isinstance(v, (Fraction, int)) else f"{v:.6g}"


def _check_totality(G: FiniteGroupoid, c: Certificate):
    for n, f in enumerate(c.functions):
        if len(f) != G.n_arrows:
            raise TotalityViolation(f"function {n} has {len(f)} values for {G.n_arrows} arrows")
        for g, v in enumerate(f):
            if isinstance(v, bool) or not isinstance(v, Real) or not math.isfinite(v):
                raise TotalityViolation(f"function {n} has no finite real value at arrow {g}: {v!r}")


def check_certificate(
    G: FiniteGroupoid,
    c: Certificate,
    eq_tol: float | None = None,
    *,
    bound: float = math.inf,
) -> CheckReport:
    _check_totality(G, c)
    exact = c.exact
    if eq_tol is None:
        eq_tol = 0 if exact else DEFAULT_EQ_TOL
    fib = _fibers(G, c.orientation)

    bound_a = 0
    unit_sums, witnesses = [], []
    worst = (0, G.units[0], -1)
    for n, f in enumerate(c.functions):
        sums = {}
        for x in G.units:
            fiber = fib(x)
            bound_a = max(bound_a, sum(abs(f[g]) for g in fiber))
            total = sum(f[g] for g in fiber)
            sums[x] = total
            dev = abs(total - 1)
            if dev > worst[2]:
                worst = (n, x, dev)
            if dev > eq_tol:
                witnesses.append((n, x, total))
        unit_sums.append(sums)

    arrow_defects, defects, defect_witnesses = [], [], []
    for f in c.functions:
        per = [_arrow_defect(G, c.orientation, f, g) for g in G.arrows]
        arrow_defects.append(per)
        top = max(range(len(per)), key=per.__getitem__)
        defects.append(per[top])
        defect_witnesses.append(top)
    monotone = all(b <= a + eq_tol for a, b in zip(defects, defects[1:]))
    cond_c = monotone and defects[-1] <= c.tolerance_schedule[-1]

    return CheckReport(
        orientation=c.orientation,
        exact=exact,
        eq_tol=eq_tol,
        bound_a=bound_a,
        bound_ok=bound_a <= bound,
        cond_b_ok=not witnesses,
        cond_b_witnesses=witnesses,
        cond_b_worst=worst,
        defects=defects,
        defect_witnesses=defect_witnesses,
        cond_c_ok=cond_c,
        unit_sums=unit_sums,
        arrow_defects=arrow_defects,
    )


def convert_orientation(c: Certificate, G: FiniteGroupoid) -> Certificate:
    """Compose every function with the inverse map and flip the orientation."""
    funcs = tuple(tuple(f[G.inv(g)] for g in G.arrows) for f in c.functions)
    return Certificate("d" if c.orientation == "r" else "r", funcs, c.tolerance_schedule)


def uniform_certificate(G: FiniteGroupoid, *, exact: bool = True) -> Certificate:
    """g(γ) = 1/|G^{r(γ)}|, a single r-form function with zero tolerance."""
    one = Fraction(1) if exact else 1.0
    f = tuple(one / len(G.r_fiber(G.r(g))) for g in G.arrows)
    return Certificate("r", (f,), (0,))


def pullback_certificate(h: GroupoidHom, c: Certificate) -> Certificate:
    """h_n = c_n ∘ φ along a d-bijective homomorphism φ; c must be in d-form."""
    if c.orientation != "d":
        raise ValueError("pullback needs a d-form certificate; convert it first")
    try:
        bad = d_bijectivity_failures(h)
    except NotAHomomorphism as exc:
        raise NotDBijective(f"not a groupoid homomorphism: {exc}") from None
    if bad:
        raise NotDBijective(f"source fibers at units {bad} do not map bijectively")
    phi = h.arrow_map
    return Certificate("d", tuple(tuple(f[phi[g]] for g in h.source.arrows) for f in c.functions), c.tolerance_schedule)


def transport_mismatches(h: GroupoidHom, target: CheckReport, source: CheckReport) -> list[tuple]:
    """Where the pulled-back fiber sums or defects differ from the target's.

    On a d-bijective φ: Σ_{G_x} h_n = Σ_{H_φ(x)} c_n and defect_h(γ) = defect_c(φ(γ)),
    exactly, for every unit x, arrow γ and index n.
    """
    phi = h.arrow_map
    out = []
    for n, (ts, ss) in enumerate(zip(target.unit_sums, source.unit_sums)):
        for x, v in ss.items():
            if v != ts[phi[x]]:
                out.append(("sum", n, x))
    for n, (td, sd) in enumerate(zip(target.arrow_defects, source.arrow_defects)):
        for g, v in enumerate(sd):
            if v != td[phi[g]]:
                out.append(("defect", n, g))
    return out


# -- end-to-end transfer from G(θ) to G(α) --------------------------------

@dataclass
class TransferReport:
    stages: dict[str, bool]
    details: dict[str, object]
    target_report: CheckReport | None = None
    source_report: CheckReport | None = None
    bundle: object = field(default=None, repr=False)
    # the target check redone in d-form, which is what the pullback is compared against
    target_d_report: CheckReport | None = field(default=None, repr=False)

    @property
    def verdict(self) -> bool:
        return all(self.stages.values())

    def to_json_dict(self) -> dict:
        out = {
            "stages": dict(self.stages),
            "details": self.details,
            "verdict": "pass" if self.verdict else "fail",
        }
        if self.target_report is not None:
            out["target_check"] = self.target_report.to_json_dict()
        if self.source_report is not None:
            out["source_check"] = self.source_report.to_json_dict()
        return out


def verify_amenability_transfer(
    A: Action,
    certificate: Certificate | None = None,
    *,
    eq_tol: float | None = None,
) -> TransferReport:
    """Pull a certificate on the universal groupoid G(θ) back to G(α) through ρ̃.

    Stages, each reported separately: the action is valid, both groupoids
    satisfy the axioms, the certificate passes on G(θ), ρ̃ is a d-bijective
    homomorphism, the pullback transports sums and defects exactly, and the
    pulled-back certificate passes on G(α). Without a user certificate the
    exact uniform one on G(θ) is used.
    """
    from .rho import rho_bundle

    stages: dict[str, bool] = {}
    details: dict[str, object] = {}
    rep = validate_action(A)
    stages["action"] = rep.ok
    if not rep.ok:
        details["action"] = [list(map(str, (k,) + w)) for k, w in rep.violations[:10]]
        return TransferReport(stages, details)

    bundle = rho_bundle(A)
    Ga, Gt = bundle.source, bundle.target
    stages["theta_groupoid"] = check_axioms(Gt).ok
    stages["alpha_groupoid"] = check_axioms(Ga).ok
    details["arrows"] = {"alpha": Ga.n_arrows, "theta": Gt.n_arrows}
    details["units"] = {"alpha": len(Ga.units), "theta": len(Gt.units)}

    cert = certificate if certificate is not None else uniform_certificate(Gt)
    target_report = check_certificate(Gt, cert, eq_tol)
    stages["target_check"] = target_report.verdict

    h = bundle.hom
    stages["rho_homomorphism"] = is_homomorphism(h)
    bad = d_bijectivity_failures(h) if stages["rho_homomorphism"] else list(Ga.units)
    stages["rho_d_bijective"] = not bad
    if bad:
        details["rho_d_bijective"] = bad
        return TransferReport(stages, details, target_report, bundle=bundle)

    d_cert = cert if cert.orientation == "d" else convert_orientation(cert, Gt)
    pulled = pullback_certificate(h, d_cert)
    d_target = check_certificate(Gt, d_cert, eq_tol)
    source_report = check_certificate(Ga, pulled, eq_tol)
    mismatches = transport_mismatches(h, d_target, source_report)
    stages["transport"] = not mismatches
    if mismatches:
        details["transport"] = mismatches[:10]
    stages["source_check"] = source_report.verdict
    return TransferReport(stages, details, target_report, source_report, bundle, d_target)


# -- certificate files ----------------------------------------------------

def _parse_value(v):
    if isinstance(v, bool):
        raise FormatError(f"boolean is not a certificate value: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise FormatError(f"cannot read {v!r} as a rational") from None
    raise FormatError(f"unsupported certificate value {v!r}")


def certificate_to_json_dict(c: Certificate) -> dict:
    return {
        "orientation": c.orientation,
        "functions": [{str(g): _num(v) for g, v in enumerate(f)} for f in c.functions],
        "tolerance_schedule": [_num(e) for e in c.tolerance_schedule],
    }


def dumps_certificate(c: Certificate) -> str:
    return json.dumps(certificate_to_json_dict(c), indent=1, sort_keys=True) + "\n"


def certificate_from_json_dict(data: dict, n_arrows: int | None = None) -> Certificate:
    try:
        funcs = []
        for n, m in enumerate(data["functions"]):
            vals = {int(k): _parse_value(v) for k, v in m.items()}
            size = n_arrows if n_arrows is not None else (max(vals) + 1 if vals else 0)
            if set(vals) != set(range(size)):
                raise TotalityViolation(f"function {n} is not defined on every arrow 0..{size - 1}")
            funcs.append(tuple(vals[g] for g in range(size)))
        sched = tuple(_parse_value(e) for e in data.get("tolerance_schedule", [0] * len(funcs)))
        return Certificate(data["orientation"], tuple(funcs), sched)
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed certificate JSON: {exc!r}") from exc
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def loads_certificate(text: str, n_arrows: int | None = None) -> Certificate:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from exc
    return certificate_from_json_dict(data, n_arrows)

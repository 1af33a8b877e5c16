"""Per-instance end-to-end analysis: reformulate, extract, decompose,
certify, measure widths, and optionally cross-check against the oracles."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .documents import (
    REPORT_SCHEMA,
    exact_and_display,
    instance_to_doc,
    ivec,
    mat,
    ratio_field,
    verdict,
)
from .errors import BudgetExceeded, OrthogonalDirectionError
from .exact import unit
from .lattice import sublattice_det_check
from .oracle import DEFAULT_BUDGET, EnumerationBudget, bijection_check, node_count, vertex_enum_optimize
from .parallel import (
    certify_thm3,
    certify_thm4,
    certify_thm5,
    certify_thm6,
    check_prop1,
    decompose,
    extract_range_direction,
    null_inverse,
    successive,
)
from .reform import (
    KnapsackInstance,
    build_nullspace,
    build_rangespace,
    check_hypothesis,
    check_reforms,
    density_approx,
)
from .width import (
    branch_bound,
    iwidth,
    kp_polytope,
    lp_optimize,
    thm1_bound_null,
    thm1_bound_range,
    transference_check,
)


@dataclass
class Options:
    k: int = 3
    oracle: bool = False
    budget: EnumerationBudget = DEFAULT_BUDGET
    timings: bool = False


@dataclass
class _Ledger:
    failures: list = field(default_factory=list)
    budget_exceeded: bool = False

    def need(self, name: str, ok) -> None:
        """Record a failure when an applicable verdict is False."""
        if ok is False:
            self.failures.append(name)

    def need_all(self, prefix: str, items: dict) -> None:
        for key, val in items.items():
            if key != "hyp":
                self.need(f"{prefix}.{key}", val)


def _decomp_fields(dec) -> dict:
    return {
        "p": ivec(dec.p),
        "lambda": exact_and_display(dec.lam),
        "r_norm_sq": exact_and_display(dec.r_norm_sq),
        "ratio": ratio_field(dec.ratio_sq),
    }


def _verdicts(d: dict) -> dict:
    return {k: verdict(v) for k, v in d.items()}


def analyze(inst: KnapsackInstance, opts: Options | None = None, provenance: dict | None = None) -> dict:
    opts = opts or Options()
    led = _Ledger()
    t0 = time.perf_counter()
    a, n, v = inst.a, inst.n, inst.v
    hyp = check_hypothesis(a)
    Q = kp_polytope(inst)

    rep: dict = {
        "instance": instance_to_doc(inst, provenance),
        "density": {"display": density_approx(a)},
        "hypothesis": hyp,
    }

    # ---------------- rangespace
    rr = build_rangespace(inst)
    for msg in check_reforms(rr=rr):
        led.failures.append(f"rangespace: {msg}")
    p1 = extract_range_direction(rr)
    d1 = decompose(a, p1)
    range_sec = {"U": mat(rr.U), "U_inv": mat(rr.U_inv), "aU": ivec(rr.aU), **_decomp_fields(d1)}

    cert: dict = {}
    thm2 = all(sublattice_det_check(rr.reduced, ell) for ell in range(1, n + 1))
    led.need("thm2.range", thm2)
    cert["thm2_range"] = thm2

    c3 = certify_thm3(a, d1)
    if hyp:
        led.need_all("thm3", c3)
    cert["thm3"] = _verdicts(c3)

    thm5 = {}
    for k in range(1, min(opts.k, n) + 1):
        S = successive(rr.U_inv, a, k)
        c5 = certify_thm5(a, S)
        led.need(f"thm5.k{k}.sin_le_ratio", c5["sin_le_ratio"])
        if hyp:
            led.need_all(f"thm5.k{k}", c5)
        thm5[f"k={k}"] = _verdicts(c5)
        if k == 1:
            same = (S.r == d1.r and S.lam_sq == Fraction(d1.lam) ** 2
                    and {key: c5[key] for key in c3} == c3)
            led.need("thm5.k1_matches_thm3", same)
            cert["thm5_k1_matches_thm3"] = same
    cert["thm5"] = thm5

    pr1 = check_prop1(a, d1.p)
    led.need_all("prop1_range", pr1)
    cert["prop1_range"] = _verdicts(pr1)

    widths: dict = {}
    tr = transference_check(inst, rr, d1.p)
    led.need("transference.range", tr.ok)
    unit_widths = [iwidth(unit(n, i), Q) for i in range(n)]
    bb1 = branch_bound(d1, v, inst.beta1, inst.beta2) if min(d1.p) >= 0 else None
    t1r = thm1_bound_range(a, v, inst.beta1, inst.beta2)
    range_thm1_ok = tr.iwidth_reformed <= t1r
    if hyp:
        led.need("thm1.range", range_thm1_ok)
    bb1_ok = None if bb1 is None else tr.iwidth_original <= bb1
    led.need("branch_bound.range", bb1_ok)
    widths["original_min_unit_iwidth"] = min(unit_widths)
    widths["range"] = {
        "iwidth_p_original": tr.iwidth_original,
        "iwidth_en_reformed": tr.iwidth_reformed,
        "pU_unit": tr.unit_image,
        "transference": tr.ok,
        "branch_bound": "n/a" if bb1 is None else bb1,
        "branch_bound_holds": verdict(bb1_ok),
        "thm1_bound": t1r,
        "thm1_holds": range_thm1_ok,
        "thm1_applicable": hyp,
    }

    # ---------------- nullspace
    null_sec: dict = {"applicable": False}
    d2 = nr = None
    if inst.is_equality and n >= 2:
        nr = build_nullspace(inst)
        for msg in check_reforms(nr=nr):
            led.failures.append(f"nullspace: {msg}")
        inv = null_inverse(nr)
        p2 = inv.row(n - 2)
        null_sec = {"applicable": True, "V": mat(nr.V), "b": ivec(nr.b), "x_beta": ivec(nr.x_beta)}
        if n >= 3:
            thm2n = all(sublattice_det_check(nr.V, ell) for ell in range(1, n))
            led.need("thm2.null", thm2n)
            cert["thm2_null"] = thm2n
        try:
            d2 = decompose(a, p2)
        except OrthogonalDirectionError:
            d2 = None
            null_sec["direction"] = "orthogonal to a"
            led.need("thm4.r_nonzero", False if hyp else None)
        if d2 is not None:
            null_sec.update(_decomp_fields(d2))
            c4 = certify_thm4(a, d2)
            if hyp:
                led.need_all("thm4", c4)
            cert["thm4"] = _verdicts(c4)
            thm6 = {}
            for k in range(1, min(opts.k, n - 1) + 1):
                S = successive(inv, a, k, skip_last=1)
                c6 = certify_thm6(a, S)
                led.need(f"thm6.k{k}.sin_le_ratio", c6["sin_le_ratio"])
                if hyp:
                    led.need_all(f"thm6.k{k}", c6)
                thm6[f"k={k}"] = _verdicts(c6)
                if k == 1:
                    same = (S.r == d2.r and S.lam_sq == Fraction(d2.lam) ** 2
                            and {key: c6[key] for key in c4} == c4)
                    led.need("thm6.k1_matches_thm4", same)
                    cert["thm6_k1_matches_thm4"] = same
            cert["thm6"] = thm6
            pr2 = check_prop1(a, d2.p)
            led.need_all("prop1_null", pr2)
            cert["prop1_null"] = _verdicts(pr2)

            tn = transference_check(inst, nr, d2.p)
            led.need("transference.null", tn.ok)
            bb2 = branch_bound(d2, v, inst.beta1, inst.beta2) if min(d2.p) >= 0 else None
            bb2_ok = None if bb2 is None else tn.iwidth_original <= bb2
            led.need("branch_bound.null", bb2_ok)
            t1n = thm1_bound_null(a, v)
            null_thm1_ok = tn.iwidth_reformed <= t1n
            if hyp:
                led.need("thm1.null", null_thm1_ok)
            widths["null"] = {
                "iwidth_p_original": tn.iwidth_original,
                "iwidth_en1_reformed": tn.iwidth_reformed,
                "pV_unit": tn.unit_image,
                "transference": tn.ok,
                "branch_bound": "n/a" if bb2 is None else bb2,
                "branch_bound_holds": verdict(bb2_ok),
                "thm1_bound": t1n,
                "thm1_holds": null_thm1_ok,
                "thm1_applicable": hyp,
            }

    rep["rangespace"] = range_sec
    rep["nullspace"] = null_sec
    rep["certificates"] = cert
    rep["widths"] = widths

    # ---------------- oracles
    if opts.oracle:
        orc: dict = {}
        try:
            nc = node_count(inst, d1.p, opts.budget)
            orc["node_count_range_agrees"] = nc == tr.iwidth_original
            led.need("oracle.node_count_range", orc["node_count_range_agrees"])
            for sense in ("max", "min"):
                lp = lp_optimize(d1.p, Q, sense)
                ve = vertex_enum_optimize(d1.p, Q, sense, opts.budget)
                same = lp.status == ve.status and lp.value == ve.value
                orc[f"lp_{sense}_agrees"] = same
                led.need(f"oracle.lp_{sense}", same)
            b = bijection_check(inst, rr, opts.budget)
            orc["bijection_range"] = b.ok
            orc["feasible_points"] = b.original
            led.need("oracle.bijection_range", b.ok)
            if nr is not None:
                bn = bijection_check(inst, nr, opts.budget)
                orc["bijection_null"] = bn.ok
                led.need("oracle.bijection_null", bn.ok)
                if d2 is not None:
                    ncn = node_count(inst, d2.p, opts.budget)
                    orc["node_count_null_agrees"] = ncn == widths["null"]["iwidth_p_original"]
                    led.need("oracle.node_count_null", orc["node_count_null_agrees"])
        except BudgetExceeded as e:
            led.budget_exceeded = True
            orc["budget_exceeded"] = str(e)
        rep["oracle"] = orc
    else:
        rep["oracle"] = "n/a"

    rep["failures"] = led.failures
    rep["ok"] = not led.failures
    rep["budget_exceeded"] = led.budget_exceeded
    if opts.timings:
        rep["seconds"] = round(time.perf_counter() - t0, 6)
    return rep


def build_report(items: list[dict]) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "count": len(items),
        "ok": all(it["ok"] for it in items),
        "instances": items,
    }


def exit_code(report: dict) -> int:
    if not report["ok"]:
        return 1
    if any(it.get("budget_exceeded") for it in report["instances"]):
        return 3
    return 0


CSV_COLUMNS = [
    "index", "n", "density", "hypothesis", "lambda_range", "ratio_range", "iwidth_p_range",
    "iwidth_en_range", "thm1_bound_range", "branch_bound_range", "lambda_null", "ratio_null",
    "iwidth_en1_null", "thm1_bound_null", "ok", "failures",
]


def csv_row(i: int, rep: dict) -> list[str]:
    rs, ns = rep["rangespace"], rep["nullspace"]
    wr = rep["widths"]["range"]
    wn = rep["widths"].get("null", {})
    return [
        str(i), str(rep["instance"]["n"]), rep["density"]["display"], str(rep["hypothesis"]).lower(),
        rs["lambda"]["exact"], rs["ratio"]["display"], str(wr["iwidth_p_original"]),
        str(wr["iwidth_en_reformed"]), str(wr["thm1_bound"]), str(wr["branch_bound"]),
        ns["lambda"]["exact"] if "lambda" in ns else "n/a",
        ns["ratio"]["display"] if "ratio" in ns else "n/a",
        str(wn.get("iwidth_en1_reformed", "n/a")), str(wn.get("thm1_bound", "n/a")),
        str(rep["ok"]).lower(), ";".join(rep["failures"]),
    ]


def text_summary(report: dict) -> str:
    lines = []
    for i, rep in enumerate(report["instances"]):
        rs = rep["rangespace"]
        wr = rep["widths"]["range"]
        lines.append(f"instance {i}: n={rep['instance']['n']} density~{rep['density']['display']} "
                     f"hypothesis={'yes' if rep['hypothesis'] else 'no'}")
        lines.append(f"  range: p={','.join(rs['p'])} lambda~{rs['lambda']['display']} "
                     f"||r||/lambda~{rs['ratio']['display']}")
        lines.append(f"         iwidth(e_n, KP-R)={wr['iwidth_en_reformed']} thm1 bound={wr['thm1_bound']} "
                     f"branch bound={wr['branch_bound']}")
        ns = rep["nullspace"]
        if ns.get("applicable") and "lambda" in ns:
            wn = rep["widths"]["null"]
            lines.append(f"  null:  p={','.join(ns['p'])} lambda~{ns['lambda']['display']} "
                         f"||r||/lambda~{ns['ratio']['display']}")
            lines.append(f"         iwidth(e_n-1, KP-N)={wn['iwidth_en1_reformed']} thm1 bound={wn['thm1_bound']}")
        lines.append(f"  verdict: {'ok' if rep['ok'] else 'FAILED ' + ', '.join(rep['failures'])}")
    lines.append(f"overall: {'ok' if report['ok'] else 'FAILED'}")
    return "\n".join(lines)

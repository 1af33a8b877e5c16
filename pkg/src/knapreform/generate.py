"""Random knapsack instances from G_n(M) = {a : a_i in 1..M}, and batch experiments."""
from __future__ import annotations

import csv
import io
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exact import dot, format_decimal, gcd_all, iroot
from .pipeline import Options, analyze
from .reform import KnapsackInstance, check_hypothesis, density_below

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 100_000
BETA_MODES = ("range", "equal", "feasible")


def bound_for_density(n: int, d: Fraction) -> int:
    """M = ceil(2^(n/d))."""
    e = Fraction(n) / Fraction(d)
    target = 2 ** e.numerator
    m = iroot(target, e.denominator)
    return m if m ** e.denominator == target else m + 1


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    M: int | None = None
    density: Fraction | None = None
    vmax: int = 1
    beta: str = "feasible"
    hypothesis: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if (self.M is None) == (self.density is None):
            raise ValueError("give exactly one of M and density")
        if self.M is not None and self.M < 1:
            raise ValueError("M must be positive")
        if self.density is not None and Fraction(self.density) <= 0:
            raise ValueError("density must be positive")
        if self.vmax < 0:
            raise ValueError("vmax must be nonnegative")
        if self.beta not in BETA_MODES:
            raise ValueError(f"beta mode must be one of {BETA_MODES}")

    @property
    def bound(self) -> int:
        return self.M if self.M is not None else bound_for_density(self.n, Fraction(self.density))

    def provenance(self) -> dict:
        return {
            "n": self.n,
            "M": str(self.bound),
            "density": None if self.density is None else str(Fraction(self.density)),
            "vmax": self.vmax,
            "beta": self.beta,
            "hypothesis": self.hypothesis,
        }


def _weights(rng: random.Random, prm: GeneratorParams) -> tuple:
    M = prm.bound
    # density mode tolerates up to 5/4 of the requested density
    slack = None if prm.density is None else Fraction(prm.density) * Fraction(5, 4)
    for _ in range(MAX_ATTEMPTS):
        a = tuple(rng.randint(1, M) for _ in range(prm.n))
        if gcd_all(a) != 1:
            log.debug("gcd(a) != 1, regenerating")
            continue
        if slack is not None and not density_below(a, slack):
            log.debug("density above %s, regenerating", slack)
            continue
        if prm.hypothesis and not check_hypothesis(a):
            log.debug("||a|| below the hypothesis threshold, regenerating")
            continue
        return a
    raise ValueError(f"could not draw admissible weights in {MAX_ATTEMPTS} attempts")


def generate(prm: GeneratorParams, count: int, seed) -> Iterator[tuple[KnapsackInstance, dict]]:
    """Deterministic stream of (instance, provenance) for a given seed."""
    rng = random.Random(seed)
    for i in range(count):
        a = _weights(rng, prm)
        v = tuple(rng.randint(min(1, prm.vmax), prm.vmax) for _ in range(prm.n))
        av = dot(a, v)
        if prm.beta == "range":
            b1, b2 = sorted((rng.randint(0, av), rng.randint(0, av)))
        elif prm.beta == "equal":
            b1 = b2 = rng.randint(0, av)
        else:
            x = tuple(rng.randint(0, vi) for vi in v)
            b1 = b2 = dot(a, x)
        prov = {"seed": str(seed), "index": i, "generator": prm.provenance()}
        yield KnapsackInstance(a, v, b1, b2), prov


# ------------------------------------------------------------------ experiments

SUMMARY_COLUMNS = [
    "n", "param", "count", "hypothesis_count", "frac_iwidth_le1_range", "frac_iwidth_le1_null",
    "mean_tightness_range", "max_tightness_range", "thm1_violations", "failed_instances",
]


def _frac(num: int, den: int) -> str:
    return "n/a" if den == 0 else format_decimal(Fraction(num, den))


def run_experiment(config: dict) -> tuple[list[list[str]], list[dict]]:
    """Batch pipeline over an (n, density-or-M) grid.

    Returns the summary rows (strings, deterministic) and the per-instance reports.
    """
    ns = config.get("n", [])
    if isinstance(ns, int):
        ns = [ns]
    densities = config.get("density")
    bigMs = config.get("bigM")
    if (densities is None) == (bigMs is None):
        raise ValueError("experiment config needs exactly one of 'density' and 'bigM'")
    params = [("density", Fraction(str(d))) for d in densities] if densities is not None \
        else [("M", int(m)) for m in bigMs]
    count = int(config.get("count", 10))
    seed = config.get("seed", 0)
    opts = Options(k=int(config.get("k", 3)), oracle=bool(config.get("oracle", False)))
    rows, reports = [], []
    for n in ns:
        for kind, val in params:
            prm = GeneratorParams(
                n=int(n),
                M=val if kind == "M" else None,
                density=val if kind == "density" else None,
                vmax=int(config.get("vmax", 1)),
                beta=config.get("beta", "feasible"),
                hypothesis=bool(config.get("hypothesis", False)),
            )
            hyp = le1_r = le1_n = n_null = viol = failed = 0
            ratios = []
            for inst, prov in generate(prm, count, f"{seed}:{n}:{kind}={val}"):
                rep = analyze(inst, opts, prov)
                reports.append(rep)
                wr = rep["widths"]["range"]
                hyp += rep["hypothesis"]
                le1_r += wr["iwidth_en_reformed"] <= 1
                ratios.append(Fraction(wr["iwidth_en_reformed"], wr["thm1_bound"]))
                if "null" in rep["widths"]:
                    n_null += 1
                    le1_n += rep["widths"]["null"]["iwidth_en1_reformed"] <= 1
                    viol += rep["hypothesis"] and not rep["widths"]["null"]["thm1_holds"]
                viol += rep["hypothesis"] and not wr["thm1_holds"]
                failed += not rep["ok"]
            if not count:
                continue
            rows.append([
                str(n), f"{kind}={val}", str(count), str(hyp), _frac(le1_r, count), _frac(le1_n, n_null),
                format_decimal(sum(ratios) / len(ratios)) if ratios else "n/a",
                format_decimal(max(ratios)) if ratios else "n/a",
                str(viol), str(failed),
            ])
    return rows, reports


def summary_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()

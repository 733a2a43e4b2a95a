"""Report builders behind the command line; all outputs are plain JSON-able data."""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import families
from .affine import nonzero_fraction, poly_sparsity
from .errors import InvariantError
from .pdt import (Selector, assert_lemmas, build_optimal_nadt, ceil_s23, ceil_sqrt,
                  depth_bound_report, lemma_margins, resolve_tau, run_procedure,
                  verify_certificate)
from .spectrum import (BooleanFunction, check_norm_sparsity, check_order_chain, dimension,
                       parseval_ok, sparsity, spectral_norm, wht)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


@dataclass
class AnalysisReport:
    input_descriptor: str
    n: int
    s: int
    dim: int
    l1_norm: dict
    eq1_ok: bool
    norm_sparsity_ok: bool
    parseval_ok: bool
    optimal_nadt_depth: int
    optimal_nadt_verified: bool
    procedure_runs: list = field(default_factory=list)

    @property
    def status(self) -> str:
        ok = self.eq1_ok and self.norm_sparsity_ok and self.parseval_ok and self.optimal_nadt_verified
        return "OK" if ok else "FAILED"

    def to_json(self) -> dict:
        out = asdict(self)
        out["status"] = self.status
        return out


def analyze(f: BooleanFunction, descriptor: str) -> AnalysisReport:
    sp = wht(f)
    l1 = spectral_norm(sp, 1)
    cert = build_optimal_nadt(f)
    return AnalysisReport(
        input_descriptor=descriptor,
        n=f.n,
        s=sparsity(sp),
        dim=dimension(sp),
        l1_norm={"num": l1.numerator, "den": l1.denominator},
        eq1_ok=check_order_chain(sp),
        norm_sparsity_ok=check_norm_sparsity(sp),
        parseval_ok=parseval_ok(sp),
        optimal_nadt_depth=cert.depth,
        optimal_nadt_verified=verify_certificate(f, cert),
    )


def tau_target(tau_spec: str, s: int) -> int | None:
    """Normaliser for the depth ratio reported per tau setting."""
    if tau_spec == "s23":
        return ceil_s23(s)
    if tau_spec == "2sqrt":
        return ceil_sqrt(4 * s)
    return None


@dataclass
class ProcedureOutcome:
    summary: dict
    trace_csv: str
    trace_json: dict
    certificate_json: dict
    verified: bool
    violations: list

    @property
    def exit_code(self) -> int:
        if not self.verified:
            return 4
        if self.violations:
            return 3
        return 0


def procedure(f: BooleanFunction, descriptor: str, tau_spec: str, finder: str = "greedy",
              selector: str = "exhaustive", seed: int = 0) -> ProcedureOutcome:
    sp = wht(f)
    s = sparsity(sp)
    tau = resolve_tau(tau_spec, s)
    sel = Selector.parse(selector, seed)
    cert, trace = run_procedure(f, tau, finder, sel)
    verified = verify_certificate(f, cert, seed)
    violations = assert_lemmas(trace) if sel.mode == "EXHAUSTIVE" else []
    report = depth_bound_report(f, trace)
    margins = lemma_margins(trace)
    target = tau_target(str(tau_spec), s)
    summary = {
        "input": descriptor,
        "n": f.n,
        "s": s,
        "dim": report.dim,
        "tau_spec": str(tau_spec),
        "tau": tau,
        "finder": finder,
        "selector": selector,
        "iterations": trace.t,
        "final_coset_queries": trace.final_coset_queries,
        "depth": trace.total_depth,
        "depth_over_tau_target": None if target is None else round(trace.total_depth / target, 6),
        "depth_report": {k: (round(v, 6) if isinstance(v, float) else v)
                         for k, v in report.to_json().items()},
        "min_margin_support": min((m.support for m in margins if m.checked), default=None),
        "min_margin_reduction": min((m.reduction for m in margins if m.checked), default=None),
        "min_margin_final": min((m.final for m in margins if m.final is not None), default=None),
        "verified": verified,
        "lemma_violations": violations,
    }
    if sel.mode != "EXHAUSTIVE":
        summary["sampled_report"] = assert_lemmas(trace)
    return ProcedureOutcome(summary, trace.to_csv(), trace.to_json(), cert.to_json(), verified, violations)


SWEEP_COLUMNS = ["family", "params", "n", "s", "dim", "tau_spec", "tau", "depth",
                 "depth_over_tau_target", "depth_over_s23", "depth_over_sqrt_s", "iterations",
                 "min_margin_support", "min_margin_reduction", "min_margin_final",
                 "lemma_violations", "verified", "status"]


def _sweep_row(args) -> dict:
    spec, tau_spec, finder = args
    row = {"family": spec.get("family"), "params": families.describe(spec), "tau_spec": tau_spec}
    try:
        f = families.from_spec(spec)
        info = analyze(f, json.dumps(spec, sort_keys=True))
        out = procedure(f, row["params"], tau_spec, finder)
        sm = out.summary
        row.update(
            n=f.n, s=info.s, dim=info.dim, tau=sm["tau"], depth=sm["depth"],
            depth_over_tau_target=sm["depth_over_tau_target"],
            depth_over_s23=sm["depth_report"]["ratio_depth_to_s23"],
            depth_over_sqrt_s=sm["depth_report"]["ratio_depth_to_sqrt_s"],
            iterations=sm["iterations"],
            min_margin_support=sm["min_margin_support"],
            min_margin_reduction=sm["min_margin_reduction"],
            min_margin_final=sm["min_margin_final"],
            lemma_violations=len(out.violations), verified=out.verified,
        )
        ok = info.status == "OK" and out.exit_code == 0
        row["status"] = "OK" if ok else "FAILED"
    except Exception as exc:  # a failed instance becomes a marked row
        row["status"] = f"FAILED: {type(exc).__name__}: {exc}"
    return {c: row.get(c) for c in SWEEP_COLUMNS}


def sweep(specs: list[dict], taus: list[str], finder: str = "greedy", jobs: int = 1) -> tuple[list[dict], dict]:
    tasks = [(spec, tau, finder) for spec in specs for tau in taus]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]
    summary = {"rows": len(rows), "failed": sum(r["status"] != "OK" for r in rows), "max_ratio": {}}
    for tau in taus:
        vals = [r["depth_over_tau_target"] for r in rows
                if r["tau_spec"] == tau and r["depth_over_tau_target"] is not None]
        summary["max_ratio"][tau] = max(vals) if vals else None
    return rows, summary


def rows_to_csv(rows: list[dict]) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def random_polynomials(trials: int, max_n: int, max_sparsity: int, seed: int):
    """Seeded nonzero integer multilinear polynomials as (monomials, m)."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        m = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, min(max_sparsity, 1 << m) + 1))
        masks = rng.choice(1 << m, size=k, replace=False)
        coeffs = rng.integers(1, 6, size=k) * rng.choice([-1, 1], size=k)
        yield [(int(a), int(c)) for a, c in zip(masks, coeffs)], m


def up_check(trials: int = 500, max_n: int = 10, max_sparsity: int = 32, seed: int = 0) -> dict:
    violations = []
    tight = 0
    worst = None
    for t, (poly, m) in enumerate(random_polynomials(trials, max_n, max_sparsity, seed)):
        s = poly_sparsity(poly)
        frac = nonzero_fraction(poly, m)
        ratio = frac * s  # >= 1 by the uncertainty principle
        if ratio < 1:
            violations.append({"trial": t, "m": m, "s": s, "fraction": str(frac)})
        if ratio == 1:
            tight += 1
        worst = ratio if worst is None else min(worst, ratio)
    return {
        "trials": trials,
        "max_n": max_n,
        "max_sparsity": max_sparsity,
        "seed": seed,
        "violations": violations,
        "tight_cases": tight,
        "min_fraction_times_s": None if worst is None else str(worst),
    }


def write_artifacts(out_dir: str | os.PathLike, files: dict[str, str]) -> None:
    """Write text files plus a manifest.json of their sha256 hashes."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for name in sorted(files):
        data = files[name].encode()
        (root / name).write_bytes(data)
        entries.append({"path": name, "sha256": hashlib.sha256(data).hexdigest()})
    (root / "manifest.json").write_bytes(dumps({"files": entries}).encode())

"""Exhaustive and sampled validation of concrete storage codes.

Checks the properties a LinearDss promises: every k-subset reconstructs,
every (failed, helpers) pair repairs exactly, bandwidth totals match the
declared gamma, per-helper symmetry, and agreement of the measured
(alpha, gamma, B) with a predicted operating point.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .dss import CodeInvariantError, LinearDss, ResourceError, encode, repair
from .dss import reconstruct as _reconstruct
from .tradeoff import OperatingPoint

EXHAUSTIVE_LIMIT = 10**5


@dataclass
class VerificationReport:
    label: str
    mode: dict
    reconstruction_ok: bool = True
    reconstruction_counterexample: tuple[int, ...] | None = None
    repair_ok: bool = True
    repair_counterexample: tuple | None = None
    checks_run: dict | None = None
    measured: OperatingPoint | None = None
    alpha_uniform: bool = True
    gamma_constant: bool = True
    symmetric: bool = True
    symmetry_max_deviation: int = 0
    predicted: OperatingPoint | None = None
    match: bool | None = None

    @property
    def ok(self) -> bool:
        passed = self.reconstruction_ok and self.repair_ok and self.alpha_uniform
        if self.match is not None:
            passed = passed and self.match
        return passed

    def to_json_dict(self) -> dict:
        def point(p):
            if p is None:
                return None
            return {
                "alpha": str(p.alpha),
                "gamma": str(p.gamma),
                "file_size": str(p.file_size),
            }

        return {
            "label": self.label,
            "mode": self.mode,
            "reconstruction_ok": self.reconstruction_ok,
            "reconstruction_counterexample": (
                None
                if self.reconstruction_counterexample is None
                else list(self.reconstruction_counterexample)
            ),
            "repair_ok": self.repair_ok,
            "repair_counterexample": (
                None
                if self.repair_counterexample is None
                else [
                    self.repair_counterexample[0],
                    list(self.repair_counterexample[1]),
                ]
            ),
            "checks_run": self.checks_run,
            "measured": point(self.measured),
            "alpha_uniform": self.alpha_uniform,
            "gamma_constant": self.gamma_constant,
            "symmetric": self.symmetric,
            "symmetry_max_deviation": self.symmetry_max_deviation,
            "predicted": point(self.predicted),
            "match": self.match,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"


def probe_messages(dss: LinearDss, seed: int = 0, strict_basis: bool = False):
    """Zero message plus two seeded-random messages.

    For a linear code a corrupted map is caught by random probes with
    overwhelming probability; strict_basis additionally probes every unit
    vector, which determines the map completely.
    """
    rnd = random.Random(seed)
    order = dss.field.order
    msgs = [[0] * dss.file_len]
    for _ in range(2):
        msgs.append([rnd.randrange(order) for _ in range(dss.file_len)])
    if strict_basis:
        for i in range(dss.file_len):
            unit = [0] * dss.file_len
            unit[i] = 1
            msgs.append(unit)
    return msgs


def _subset_plan(n, k, mode, seed, trials):
    total = comb(n, k)
    if mode == "exhaustive" or (mode == "auto" and total <= EXHAUSTIVE_LIMIT):
        if total > EXHAUSTIVE_LIMIT:
            raise ResourceError(
                f"{total} subsets exceed the exhaustive ceiling {EXHAUSTIVE_LIMIT}"
            )
        return {"kind": "exhaustive"}, list(combinations(range(n), k))
    if mode not in ("auto", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    rnd = random.Random(seed)
    subsets = [tuple(sorted(rnd.sample(range(n), k))) for _ in range(trials)]
    return {"kind": "sampled", "seed": seed, "trials": trials}, subsets


def _repair_plan(n, d, mode, seed, trials):
    total = n * comb(n - 1, d)
    if mode == "exhaustive" or (mode == "auto" and total <= EXHAUSTIVE_LIMIT):
        if total > EXHAUSTIVE_LIMIT:
            raise ResourceError(
                f"{total} repair pairs exceed the exhaustive ceiling {EXHAUSTIVE_LIMIT}"
            )
        pairs = [
            (f, helpers)
            for f in range(n)
            for helpers in combinations([i for i in range(n) if i != f], d)
        ]
        return {"kind": "exhaustive"}, pairs
    if mode not in ("auto", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    rnd = random.Random(seed)
    pairs = []
    for _ in range(trials):
        f = rnd.randrange(n)
        helpers = tuple(sorted(rnd.sample([i for i in range(n) if i != f], d)))
        pairs.append((f, helpers))
    return {"kind": "sampled", "seed": seed, "trials": trials}, pairs


def verify_reconstruction(
    dss: LinearDss,
    mode: str = "auto",
    seed: int = 0,
    trials: int = 200,
    strict_basis: bool = False,
) -> VerificationReport:
    """Decode every (or a sampled set of) k-subsets against the probe messages."""
    n, k = dss.params.n, dss.params.k
    mode_info, subsets = _subset_plan(n, k, mode, seed, trials)
    report = VerificationReport(label=dss.label, mode=mode_info)
    messages = probe_messages(dss, seed, strict_basis)
    contents = [encode(dss, m) for m in messages]
    for subset in subsets:
        for msg, content in zip(messages, contents):
            try:
                decoded = _reconstruct(dss, subset, content)
            except CodeInvariantError:
                decoded = None
            if decoded != msg:
                report.reconstruction_ok = False
                report.reconstruction_counterexample = subset
                break
        if not report.reconstruction_ok:
            break
    report.checks_run = {"reconstruction": len(subsets)}
    return report


def verify_exact_repair(
    dss: LinearDss,
    mode: str = "auto",
    seed: int = 0,
    trials: int = 200,
    strict_basis: bool = False,
):
    """Repair every (failed, helpers) pair and compare to the original content.

    Returns (report, bandwidth_reports); the bandwidth reports are checked
    to be identical across probe messages, so one list describes them all.
    """
    n, d = dss.params.n, dss.params.d
    mode_info, pairs = _repair_plan(n, d, mode, seed, trials)
    report = VerificationReport(label=dss.label, mode=mode_info)
    messages = probe_messages(dss, seed, strict_basis)
    contents = [encode(dss, m) for m in messages]
    bandwidth = []
    for failed, helpers in pairs:
        reports_here = []
        for content in contents:
            rebuilt, bw = repair(dss, failed, helpers, content)
            reports_here.append(bw)
            if rebuilt != content[failed]:
                report.repair_ok = False
                report.repair_counterexample = (failed, helpers)
                break
        if not report.repair_ok:
            break
        if any(r.per_helper != reports_here[0].per_helper for r in reports_here[1:]):
            raise CodeInvariantError(
                f"bandwidth depends on the stored data at {(failed, helpers)}"
            )
        bandwidth.append(((failed, helpers), reports_here[0]))
    report.checks_run = {"repair": len(pairs)}
    return report, bandwidth


def check_symmetric_repair(dss: LinearDss, bandwidth=None, mode="auto", seed=0, trials=200):
    """True iff every helper transfers the same amount in every repair."""
    if bandwidth is None:
        _, bandwidth = verify_exact_repair(dss, mode, seed, trials)
    max_dev = 0
    for _, bw in bandwidth:
        max_dev = max(max_dev, bw.max_deviation())
    return max_dev == 0, max_dev


def measure_and_compare(
    dss: LinearDss,
    predicted: OperatingPoint | None = None,
    mode: str = "auto",
    seed: int = 0,
    trials: int = 200,
    strict_basis: bool = False,
) -> VerificationReport:
    """Full verification: reconstruction, exact repair, symmetry, measurement.

    The measured point is in symbol units: alpha from actual node contents,
    gamma from the largest repair total, B = file_len. Matching against the
    prediction is exact rational equality of the alpha-normalized ratios.
    """
    rec = verify_reconstruction(dss, mode, seed, trials, strict_basis)
    rep, bandwidth = verify_exact_repair(dss, mode, seed, trials, strict_basis)

    lengths = {len(c) for c in encode(dss, [0] * dss.file_len)}
    alpha_uniform = len(lengths) == 1
    alpha = max(lengths)
    totals = [bw.total for _, bw in bandwidth]
    gamma = max(totals) if totals else dss.gamma_symbols
    gamma_constant = not totals or min(totals) == max(totals)
    symmetric, max_dev = check_symmetric_repair(dss, bandwidth)
    measured = OperatingPoint(Fraction(alpha), Fraction(gamma), Fraction(dss.file_len))

    match = None
    if predicted is not None:
        match = (
            measured.gamma / measured.alpha == predicted.gamma / predicted.alpha
            and measured.file_size / measured.alpha
            == predicted.file_size / predicted.alpha
        )

    checks = {
        "reconstruction": rec.checks_run["reconstruction"],
        "repair": rep.checks_run["repair"],
    }
    checks["total"] = sum(checks.values())
    return VerificationReport(
        label=dss.label,
        mode=rec.mode,
        reconstruction_ok=rec.reconstruction_ok,
        reconstruction_counterexample=rec.reconstruction_counterexample,
        repair_ok=rep.repair_ok,
        repair_counterexample=rep.repair_counterexample,
        checks_run=checks,
        measured=measured,
        alpha_uniform=alpha_uniform,
        gamma_constant=gamma_constant,
        symmetric=symmetric,
        symmetry_max_deviation=max_dev,
        predicted=predicted,
        match=match,
    )

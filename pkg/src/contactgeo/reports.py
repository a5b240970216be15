"""Check reports and their deterministic serializations.

Every suite in this package reduces to a list of ``CheckReport`` rows.
The JSON writer is hand-rolled so that output is byte-identical across
runs and platforms: fixed key order, reals always printed with 17
significant digits.
"""

import json
import math


class CheckReport:
    """Aggregated residual statistics for one named check."""

    __slots__ = ("check_name", "max_residual", "mean_residual", "tolerance",
                 "probe_count", "seed", "passed", "notes")

    def __init__(self, check_name, max_residual, mean_residual, tolerance,
                 probe_count, seed=None, notes=""):
        self.check_name = check_name
        self.max_residual = float(max_residual)
        self.mean_residual = float(mean_residual)
        self.tolerance = float(tolerance)
        self.probe_count = int(probe_count)
        self.seed = seed
        self.passed = self.max_residual <= self.tolerance
        self.notes = notes

    @classmethod
    def from_residuals(cls, name, residuals, tolerance, seed=None, notes=""):
        'Aggregate per-probe absolute residuals into one report row.'
        vals = [abs(float(r)) for r in residuals]
        if not vals:
            raise ValueError(f"check {name!r} got no residuals")
        return cls(name, max(vals), sum(vals) / len(vals), tolerance,
                   len(vals), seed=seed, notes=notes)

    @classmethod
    def failure(cls, name, tolerance, notes, probe_count=0, seed=None):
        'A row for a check that could not be evaluated at all.'
        return cls(name, math.inf, math.inf, tolerance, probe_count,
                   seed=seed, notes=notes)

    def _with(self, notes):
        'Copy of the row with its notes replaced.'
        return CheckReport(self.check_name, self.max_residual,
                           self.mean_residual, self.tolerance,
                           self.probe_count, seed=self.seed, notes=notes)

    def __repr__(self):
        status = "pass" if self.passed else "FAIL"
        return (f"CheckReport({self.check_name}: {status}, "
                f"max={self.max_residual:.3e}, tol={self.tolerance:.1e})")


def _real(x):
    if not math.isfinite(x):
        return "null"
    return "%.17g" % x


def report_json(reports):
    'Serialize reports as a JSON array with a stable byte layout.'
    items = []
    for r in reports:
        seed = "null" if r.seed is None else str(int(r.seed))
        fields = ",".join([
            f'"check_name":{json.dumps(r.check_name)}',
            f'"max_residual":{_real(r.max_residual)}',
            f'"mean_residual":{_real(r.mean_residual)}',
            f'"tolerance":{_real(r.tolerance)}',
            f'"probe_count":{r.probe_count}',
            f'"seed":{seed}',
            f'"pass":{"true" if r.passed else "false"}',
            f'"notes":{json.dumps(r.notes)}',
        ])
        items.append("  {" + fields + "}")
    return "[\n" + ",\n".join(items) + "\n]\n"


def report_text(reports):
    'Aligned human-readable table with a probes/seed header.'
    seed = next((r.seed for r in reports if r.seed is not None), "-")
    probes = max((r.probe_count for r in reports), default=0)
    head = f"checks: {len(reports)}   probes: {probes}   seed: {seed}"
    wname = max([len(r.check_name) for r in reports] + [len("check")])
    lines = [head, ""]
    lines.append(f"{'check':<{wname}}  {'max':>12}  {'mean':>12}  "
                 f"{'tol':>8}  status")
    lines.append("-" * (wname + 44))
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        mx = f"{r.max_residual:.4e}" if math.isfinite(r.max_residual) else "n/a"
        mn = f"{r.mean_residual:.4e}" if math.isfinite(r.mean_residual) else "n/a"
        lines.append(f"{r.check_name:<{wname}}  {mx:>12}  {mn:>12}  "
                     f"{r.tolerance:>8.1e}  {status}")
        if r.notes:
            lines.append(f"{'':<{wname}}  note: {r.notes}")
    lines.append("")
    return "\n".join(lines)


def all_passed(reports):
    return all(r.passed for r in reports)

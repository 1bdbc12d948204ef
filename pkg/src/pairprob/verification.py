"""Cross-engine checks over finite ranges, reported as :class:`CheckReport` rows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional

from .closedform import (
    _unpaired_dagger,
    closed_form_P,
    count_bb_selections,
    count_generic_selections,
    count_target_selections,
    normalization_sum,
    wiring_probability,
)
from .model import Configuration, admissible_j, dagger_info
from .numerics import Backend, as_backend, format_scalar
from .oracle import enumerate_process, oracle_P, symmetry_check
from .recursion import MemoTable, memoized_P

FLOAT_TOLERANCE = 1e-12


@dataclass
class CheckReport:
    name: str
    range: str
    tolerance: float = 0.0
    worst_input: Optional[Any] = None
    discrepancy: float = 0.0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.discrepancy <= self.tolerance

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def record(self, where, discrepancy) -> None:
        if self.worst_input is None or discrepancy > self.discrepancy:
            self.worst_input, self.discrepancy = where, float(discrepancy)

    def to_json(self) -> dict:
        out = {"name": self.name, "range": self.range, "status": self.status, "tolerance": self.tolerance}
        if self.worst_input is not None:
            out["worst_case"] = {"input": list(self.worst_input) if isinstance(self.worst_input, tuple)
                                 else self.worst_input, "discrepancy": self.discrepancy}
        if self.failures:
            out["failures"] = self.failures[:20]
        return out


def equivalence_suite(max_n: int, backend: Backend | str = Backend.EXACT) -> CheckReport:
    """memoized_P against closed_form_P on the square 1..max_n."""
    backend = as_backend(backend)
    exact = backend is Backend.EXACT
    report = CheckReport(
        name=f"equivalence_{backend.value}",
        range=f"1<=I,S<={max_n}",
        tolerance=0.0 if exact else FLOAT_TOLERANCE,
    )
    memo = MemoTable(backend)
    for I in range(1, max_n + 1):
        for S in range(1, max_n + 1):
            a = memoized_P((I, S), backend, memo)
            b = closed_form_P((I, S), backend)
            if exact and a != b:
                report.failures.append(f"({I},{S}): {format_scalar(a)} != {format_scalar(b)}")
            report.record((I, S), abs(a - b))
    return report


def normalization_suite(max_n: int, max_devices: Optional[int] = None) -> CheckReport:
    """Total probability over all wirings equals one, exactly."""
    report = CheckReport(name="normalization", range=f"1<=I,S<={max_n}"
                         + (f", I+S<={max_devices}" if max_devices else ""))
    for I in range(1, max_n + 1):
        for S in range(1, max_n + 1):
            if max_devices is not None and I + S > max_devices:
                continue
            total = normalization_sum((I, S))
            if total != 1:
                report.failures.append(f"({I},{S}): sum={format_scalar(total)}")
            report.record((I, S), abs(total - 1))
    return report


def oracle_suite(max_devices: int) -> CheckReport:
    """Enumeration oracle against both engines and the clean-device symmetry."""
    report = CheckReport(name="oracle", range=f"I+S<={max_devices}, S>=1")
    memo = MemoTable(Backend.EXACT)
    for S in range(1, max_devices + 1):
        for I in range(0, max_devices - S + 1):
            truth = oracle_P((I, S), cap=max_devices)
            for engine, value in (("memoized", memoized_P((I, S), Backend.EXACT, memo)),
                                  ("closed", closed_form_P((I, S), Backend.EXACT))):
                if value != truth:
                    report.failures.append(f"({I},{S}) {engine}: {format_scalar(value)} != {format_scalar(truth)}")
                report.record((I, S), abs(value - truth))
            if S >= 2 and not symmetry_check((I, S), cap=max_devices):
                report.failures.append(f"({I},{S}): clean devices not equiprobable")
            total = enumerate_process((I, S), cap=max_devices).total_probability()
            if total != 1:
                report.failures.append(f"({I},{S}): oracle total {format_scalar(total)}")
    return report


def census_mismatches(cfg) -> List[str]:
    """Every way the oracle census of ``cfg`` disagrees with the counting formulas."""
    cfg = Configuration(*cfg) if isinstance(cfg, tuple) else cfg
    census = enumerate_process(cfg, cap=cfg.I + cfg.S)
    problems = []
    admissible = set(admissible_j(cfg))
    stray = set(census.j_classes) - admissible
    if stray:
        problems.append(f"{cfg}: wirings with inadmissible j {sorted(stray)}")
    for j in sorted(admissible):
        n_bb = count_bb_selections(cfg, j)
        expected = {
            "wirings": n_bb * count_generic_selections(cfg, j),
            "target hits": n_bb * count_target_selections(cfg, j),
            "bb selections": n_bb,
        }
        observed = {
            "wirings": census.wiring_count(j),
            "target hits": census.target_hit_count(j),
            "bb selections": census.bb_selection_count(j),
        }
        for key, want in expected.items():
            if observed[key] != want:
                problems.append(f"{cfg} j={j}: {key} {observed[key]} != {want}")
        prob = wiring_probability(cfg, j)
        odd = census.class_probabilities(j) - {prob}
        if odd:
            problems.append(f"{cfg} j={j}: wiring probabilities {sorted(odd)} != {prob}")
    info = dagger_info(cfg)
    h_counts = census.dagger_h_counts()
    if not info.is_dagger:
        if h_counts:
            problems.append(f"{cfg}: unpaired infected devices outside the unpaired-device case")
    else:
        j = info.forced_j
        for h in range(1, cfg.I + 1):
            if j == 0:
                want = 1 if h == cfg.I else 0
            else:
                want = _unpaired_dagger(cfg, j, h)
            if h_counts.get(h, 0) != want:
                problems.append(f"{cfg} j={j}: b_{h} unpaired in {h_counts.get(h, 0)} bb-sets, formula {want}")
    return problems


def census_suite(max_devices: int) -> CheckReport:
    """Counting formulas against the oracle census, for every I+S <= max_devices."""
    report = CheckReport(name="census", range=f"I+S<={max_devices}, I,S>=1")
    for I in range(1, max_devices):
        for S in range(1, max_devices - I + 1):
            report.failures.extend(census_mismatches((I, S)))
    return report


def proof_identity_U(x: int) -> Fraction:
    """(4x-1)P(2x,2x) - (2x-1)[P(2x-1,2x-1) + P(2x-2,2x)], which should be 1."""
    if x < 1:
        raise ValueError("x must be positive")
    P = closed_form_P
    return (4 * x - 1) * P((2 * x, 2 * x)) - (2 * x - 1) * (P((2 * x - 1, 2 * x - 1)) + P((2 * x - 2, 2 * x)))


def proof_identity_suite(ux_max: int) -> CheckReport:
    report = CheckReport(name="proof_identity_U", range=f"1<=x<={ux_max}")
    for x in range(1, ux_max + 1):
        u = proof_identity_U(x)
        if u != 1:
            report.failures.append(f"U({x}) = {format_scalar(u)}")
        report.record(x, abs(u - 1))
    return report


LIMIT_PROBES = (
    # (I, S, predicate description, check)
    (200, 10, ">= 0.95", lambda p: p >= 0.95),
    (10, 200, "<= 0.05", lambda p: p <= 0.05),
    (100, 100, "within 0.01 of 1/2", lambda p: abs(p - 0.5) <= 0.01),
)


def limits_probe() -> CheckReport:
    report = CheckReport(name="limits", range="P(200,10), P(10,200), P(100,100)")
    for I, S, desc, ok in LIMIT_PROBES:
        p = closed_form_P((I, S), Backend.FLOAT)
        if not ok(p):
            report.failures.append(f"P({I},{S}) = {p!r}, expected {desc}")
    return report


def sawtooth_drops(clean: int = 10, lo: int = 30, hi: int = 100) -> List[int]:
    """Values of I in [lo, hi] where P(I+1, clean) < P(I, clean)."""
    values = {I: closed_form_P((I, clean)) for I in range(lo, hi + 2)}
    return [I for I in range(lo, hi + 1) if values[I + 1] < values[I]]


def run_all(max_exact: int = 30, max_float: int = 50, oracle_cap: int = 9, ux_max: int = 20) -> List[CheckReport]:
    return [
        equivalence_suite(max_exact, Backend.EXACT),
        equivalence_suite(max_float, Backend.FLOAT),
        normalization_suite(max_exact),
        oracle_suite(oracle_cap),
        census_suite(oracle_cap),
        proof_identity_suite(ux_max),
        limits_probe(),
    ]

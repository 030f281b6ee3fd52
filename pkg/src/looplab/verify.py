"""Named verification suites and their reports.

Each suite produces check records with a stable id.  Records carry no timing
data, so a report is byte-identical across reruns of the same configuration;
wall-clock times live in :attr:`VerificationReport.runtimes`.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import asm, calibrate, fpl, hamiltonian, links, xxz
from .links import Mode, Sector
from .poly import MultiPoly

SUITES = (
    "relations",
    "dimensions",
    "ground-states",
    "sum-rules",
    "density",
    "fpl-conjecture",
    "two-boundary",
    "bijection",
    "xxz",
    "markov",
)

DEFAULT_L = {
    "relations": (2, 8),
    "dimensions": (1, 10),
    "ground-states": (3, 4),
    "sum-rules": (1, 10),
    "density": (2, 10),
    "fpl-conjecture": (1, 6),
    "two-boundary": (1, 7),
    "bijection": (1, 5),
    "xxz": (2, 6),
    "markov": (1, 8),
}

SAMPLE_VALUES = (Fraction(1, 2), Fraction(1), Fraction(2))
XXZ_VALUES = (Fraction(1), Fraction(3, 2), Fraction(2))

# Components printed for the small systems, keyed by pattern.
PRINTED = {
    ("one", 3): {")))": "a", "())": "2", ")()": "a + 2"},
    ("one", 4): {
        "))))": "a^2",
        "))()": "3*a^2 + 6*a",
        ")())": "2*a^2 + 6*a",
        "()))": "3*a",
        "()()": "3*a + 6",
        "(())": "3",
    },
    ("two", 3): {"|||": "a + b + a*b", "()|": "2 + b", "|()": "2 + a"},
}

FIG2_ASM = """\
0 0 0 0 1 0 0 0 0
0 0 0 1 -1 1 0 0 0
0 0 0 0 1 0 0 0 0
0 1 0 0 -1 0 0 1 0
1 -1 1 -1 1 -1 1 -1 1
0 1 0 0 -1 0 0 1 0
0 0 0 0 1 0 0 0 0
0 0 0 1 -1 1 0 0 0
0 0 0 0 1 0 0 0 0
"""

# Conjecture checks at these sizes are pinned by printed data; larger sizes are predictions.
PINNED_MAX = {"one": 4, "two": 3}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    suite: str = "all"
    L_min: int | None = None
    L_max: int | None = None
    mode: str | None = None
    points: tuple[tuple[Fraction, Fraction], ...] = ()
    kmax: int = 10
    tol: float = 1e-8
    fmt: str = "table"
    out: str | None = None
    action: Callable | None = None

    def __post_init__(self) -> None:
        if self.suite != "all" and self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; choose from all, {', '.join(SUITES)}")
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")
        if self.L_min is not None and self.L_max is not None and self.L_min > self.L_max:
            raise UsageError("empty L range")
        if self.mode not in (None, "one", "two"):
            raise UsageError("mode must be 'one' or 'two'")
        if self.fmt not in ("table", "json", "csv"):
            raise UsageError("format must be table, json or csv")
        if self.kmax < 1:
            raise UsageError("kmax must be >= 1")

    def L_range(self, suite: str) -> range:
        lo, hi = DEFAULT_L[suite]
        lo = self.L_min if self.L_min is not None else lo
        hi = self.L_max if self.L_max is not None else hi
        return range(lo, hi + 1)

    def modes(self) -> tuple[str, ...]:
        return (self.mode,) if self.mode else ("one", "two")

    def sample_points(self) -> tuple[tuple[Fraction, Fraction], ...]:
        if self.points:
            return self.points
        return tuple((a, b) for a in SAMPLE_VALUES for b in SAMPLE_VALUES)

    def describe(self) -> dict:
        return {
            "suite": self.suite,
            "L_min": self.L_min,
            "L_max": self.L_max,
            "mode": self.mode,
            "points": [[str(a), str(b)] for a, b in self.points],
            "kmax": self.kmax,
            "tol": self.tol,
            "custom_action": self.action is not None,
        }


@dataclass(frozen=True)
class CheckRecord:
    id: str
    inputs: dict
    expected: str
    actual: str
    status: str

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail", "skipped"):
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self) -> dict:
        return {"id": self.id, "inputs": self.inputs, "expected": self.expected,
                "actual": self.actual, "status": self.status}


@dataclass
class VerificationReport:
    config: RunConfig
    records: list[CheckRecord] = field(default_factory=list)
    runtimes: dict[str, float] = field(default_factory=dict)

    def summary(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.records:
            out[r.status] += 1
        out["total"] = len(self.records)
        return out

    @property
    def ok(self) -> bool:
        return self.summary()["fail"] == 0

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == "fail"]

    def to_json(self) -> str:
        data = {
            "config": self.config.describe(),
            "records": [r.as_dict() for r in self.records],
            "summary": self.summary(),
        }
        return json.dumps(data, indent=1, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "status", "expected", "actual", "inputs"])
        for r in self.records:
            w.writerow([r.id, r.status, r.expected, r.actual, json.dumps(r.inputs, sort_keys=True)])
        return buf.getvalue()

    def to_table(self) -> str:
        width = max([len(r.id) for r in self.records] + [5])
        lines = [f"{'check'.ljust(width)}  status   expected | actual"]
        for r in self.records:
            lines.append(f"{r.id.ljust(width)}  {r.status.ljust(7)}  {_short(r.expected)} | {_short(r.actual)}")
        s = self.summary()
        lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str | None = None) -> str:
        fmt = fmt or self.config.fmt
        return {"table": self.to_table, "json": self.to_json, "csv": self.to_csv}[fmt]()


def _short(text: str, limit: int = 60) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _rec(id_: str, inputs: dict, expected, actual, ok: bool | None) -> CheckRecord:
    status = "skipped" if ok is None else "pass" if ok else "fail"
    return CheckRecord(id_, inputs, str(expected), str(actual), status)


# -- suites -----------------------------------------------------------------

def suite_relations(cfg: RunConfig) -> Iterator[CheckRecord]:
    for mode in cfg.modes():
        for L in cfg.L_range("relations"):
            if L < 2:
                continue
            for r in links.check_relations(L, mode, cfg.action):
                yield _rec(f"relations/{mode}/L{L}/{r.relation}", {"L": L, "mode": mode},
                           "holds", "holds" if r.holds else "violated", r.holds)


def suite_dimensions(cfg: RunConfig) -> Iterator[CheckRecord]:
    for L in cfg.L_range("dimensions"):
        full = len(links.enumerate_basis(L, Sector.FULL))
        yield _rec(f"dimensions/L{L}/FULL", {"L": L}, 2 ** L, full, full == 2 ** L)
        want = math.comb(L, L // 2)
        got = (len(links.enumerate_basis(L, Sector.LP0)), len(links.enumerate_basis(L, Sector.LPSTAR)))
        yield _rec(f"dimensions/L{L}/LP0-LPSTAR", {"L": L}, f"{want} {want}", f"{got[0]} {got[1]}",
                   got == (want, want))


def _printed(mode: str, L: int) -> dict[str, MultiPoly] | None:
    data = PRINTED.get((mode, L))
    return None if data is None else {k: MultiPoly.parse(v) for k, v in data.items()}


def suite_ground_states(cfg: RunConfig) -> Iterator[CheckRecord]:
    for mode in cfg.modes():
        for L in cfg.L_range("ground-states"):
            printed = _printed(mode, L)
            if printed is None:
                yield _rec(f"ground-states/{mode}/L{L}", {"L": L, "mode": mode},
                           "no printed vector", "-", None)
                continue
            psi = hamiltonian.ground_state(L, mode)
            for pattern in sorted(set(psi) | set(printed), key=links.pattern_key):
                want = printed.get(pattern)
                got = psi.get(pattern)
                yield _rec(f"ground-states/{mode}/L{L}/{pattern}", {"L": L, "mode": mode},
                           want, got, want is not None and want == got)


def suite_sum_rules(cfg: RunConfig) -> Iterator[CheckRecord]:
    for L in cfg.L_range("sum-rules"):
        if L < 1:
            continue
        z = hamiltonian.normalization_Z(L, Mode.ONE).evaluate({"a": 1})
        want = asm.count_avh(2 * L + 3)
        yield _rec(f"sum-rules/one/L{L}/Z(1)=A_VH({2 * L + 3})", {"L": L}, want, z, z == want)


def suite_density(cfg: RunConfig) -> Iterator[CheckRecord]:
    for L in cfg.L_range("density"):
        if L < 2:
            continue
        sym, closed = hamiltonian.density_rho(L)
        yield _rec(f"density/L{L}", {"L": L}, closed, sym, sym == closed)
    # The closed form is a ratio of quadratics in L; its limit is the ratio of
    # leading coefficients, 3/16 for both parities.
    limit = Fraction(3, 16)
    target = Fraction(3, 8)
    gaps = [abs(hamiltonian.density_closed_form(L) - limit) for L in range(2, 41)]
    monotone = all(x > y for x, y in zip(gaps, gaps[2:]))
    actual = f"{'monotone' if monotone else 'non-monotone'} approach to {limit}"
    yield _rec("density/closed-form-trend", {"L": "2..40"}, f"monotone approach to {target}", actual,
               monotone and limit == target)


def _conjecture_record(mode: str, L: int) -> CheckRecord:
    tag = "pinned" if L <= PINNED_MAX[mode] else "prediction"
    id_ = f"fpl-conjecture/{mode}/{tag}/L{L}"
    inputs = {"L": L, "mode": mode}
    try:
        spec = calibrate.canonical_patch(mode, L)
    except calibrate.CalibrationError as exc:
        return _rec(id_, inputs, "generating vector = ground state",
                    f"no canonical patch: {len(exc.survivors)} calibration survivors", False)
    vec = fpl.generating_vector(spec)
    psi = hamiltonian.ground_state(L, mode)
    ok = vec == psi
    actual = "equal" if ok else json.dumps(fpl.generating_vector_records(vec), sort_keys=True)
    return _rec(id_, inputs, "generating vector = ground state", actual, ok)


def suite_fpl_conjecture(cfg: RunConfig) -> Iterator[CheckRecord]:
    n3 = len(fpl.enumerate_fpl(fpl.full_grid_spec(3)))
    yield _rec("fpl-conjecture/full-grid/N3", {"N": 3}, 7, n3, n3 == 7)
    for L in cfg.L_range("fpl-conjecture"):
        if L < 1:
            continue
        yield _conjecture_record("one", L)
        if L <= 4:
            n = 2 * L + 3
            count = len(fpl.enumerate_symmetric_fullgrid(n))
            yield _rec(f"fpl-conjecture/symmetric-grid/N{n}", {"N": n}, asm.count_avh(n), count,
                       count == asm.count_avh(n))
        if 2 <= L <= 4:
            z = hamiltonian.normalization_Z(L, Mode.ONE)
            w = asm.vhasm_weighted_Z(L)
            yield _rec(f"fpl-conjecture/vhasm-census/L{L}", {"L": L}, z, w, z == w)


def suite_two_boundary(cfg: RunConfig) -> Iterator[CheckRecord]:
    for L in cfg.L_range("two-boundary"):
        if L < 1:
            continue
        if L % 2 == 1 and L >= 3:
            z = hamiltonian.normalization_Z(L, Mode.TWO)
            lhs = z * z.evaluate({"a": 1, "b": 1})
            rhs = z.partial_eval("b", 1) * z.partial_eval("a", 1)
            yield _rec(f"two-boundary/factorization/L{L}", {"L": L}, "Z(a,b)Z(1,1) = Z(a,1)Z(1,b)",
                       "identity" if lhs == rhs else "differs", lhs == rhs)
        if L <= 5:
            yield _conjecture_record("two", L)


def suite_bijection(cfg: RunConfig) -> Iterator[CheckRecord]:
    for n in cfg.L_range("bijection"):
        if n % 2 == 0 or n < 1:
            continue
        configs = fpl.enumerate_fpl(fpl.full_grid_spec(n))
        images = [asm.fpl_to_asm(c, n) for c in configs]
        valid = all(m.is_valid() for m in images)
        distinct = len(set(images)) == len(images)
        back = all(asm.asm_to_fpl(m) == c for m, c in zip(images, configs))
        ok = valid and distinct and back
        yield _rec(f"bijection/round-trip/N{n}", {"N": n}, f"{len(configs)} valid distinct round trips",
                   f"valid={valid} distinct={distinct} round_trip={back}", ok)
    fig = asm.Asm.parse(FIG2_ASM)
    ok = fig.is_valid() and asm.fpl_to_asm(asm.asm_to_fpl(fig), 9) == fig
    symmetric = asm.asm_to_fpl(fig) in fpl.enumerate_symmetric_fullgrid(9)
    yield _rec("bijection/fig2", {"N": 9}, "valid VHASM with symmetric FPL",
               f"valid={fig.is_valid()} symmetric_fpl={symmetric}", ok and symmetric)


def suite_xxz(cfg: RunConfig) -> Iterator[CheckRecord]:
    values = sorted({a for a, _ in cfg.points}) if cfg.points else XXZ_VALUES
    for L in cfg.L_range("xxz"):
        for a in values:
            inputs = {"L": L, "a": str(a), "kmax": cfg.kmax, "tol": cfg.tol}
            if a < 1 or L < 1 or L > 8:
                yield _rec(f"xxz/L{L}/a={a}", inputs, "in range", "outside a >= 1, L <= 8", None)
                continue
            r = xxz.spectrum_trace_check(L, a, cfg.kmax, cfg.tol)
            yield _rec(f"xxz/L{L}/a={a}", inputs, f"relative deviation <= {cfg.tol:g}",
                       f"max relative deviation {r.max_deviation:.3e}" if not r.passed else "within tolerance",
                       r.passed)


def suite_markov(cfg: RunConfig) -> Iterator[CheckRecord]:
    for mode in cfg.modes():
        for L in cfg.L_range("markov"):
            if L < 1:
                continue
            for sector in (Sector.FULL, hamiltonian.default_sector(mode)):
                h = hamiltonian.build_hamiltonian(L, mode, sector)
                sums = h.column_sums()
                ok = all(s.is_zero() for s in sums)
                yield _rec(f"markov/{mode}/L{L}/{sector.value}/column-sums", {"L": L, "mode": mode},
                           "all zero", "all zero" if ok else "nonzero", ok)
            if L > 8:
                continue
            psi = hamiltonian.ground_state(L, mode)
            for a, b in cfg.sample_points():
                point = {"a": a, "b": b}
                values = [v.evaluate(point) for v in psi.values()]
                ok = all(x > 0 for x in values)
                yield _rec(f"markov/{mode}/L{L}/positive/a={a},b={b}", {"L": L, "mode": mode},
                           "all components > 0", f"min {min(values)}", ok)


_SUITE_FUNCS = {
    "relations": suite_relations,
    "dimensions": suite_dimensions,
    "ground-states": suite_ground_states,
    "sum-rules": suite_sum_rules,
    "density": suite_density,
    "fpl-conjecture": suite_fpl_conjecture,
    "two-boundary": suite_two_boundary,
    "bijection": suite_bijection,
    "xxz": suite_xxz,
    "markov": suite_markov,
}


def run_suite(cfg: RunConfig) -> VerificationReport:
    report = VerificationReport(cfg)
    names: Sequence[str] = SUITES if cfg.suite == "all" else (cfg.suite,)
    for name in names:
        it = _SUITE_FUNCS[name](cfg)
        while True:
            start = time.perf_counter()
            try:
                record = next(it)
            except StopIteration:
                break
            report.runtimes[record.id] = time.perf_counter() - start
            report.records.append(record)
    return report


def corrupted_action(gen: str, word: str, sector) -> str:
    """Generator rule with ``e1`` replaced by the identity; used for negative-path runs."""
    if gen == "e1":
        return word
    return links.apply_generator(gen, word, sector)

"""Parameter sweeps, invariant checks and the reproduction table."""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import baseline, dynamics, model, schedule as sched, spectral

SWEEP_VARIABLES = ("n", "eps", "scale", "partition-skew")
CSV_VERSION = "adiasearch-sweep v1"


@dataclass(frozen=True)
class ExperimentSpec:
    variable: str
    values: tuple[float, ...]
    n: int = 64
    epsilon: float = 0.05
    scale: float = 1.0
    kind: str = "local"
    partition: model.PriorPartition | None = None
    marked_subset: int = 1
    fidelity: bool = True
    output: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.kind not in ("local", "linear"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.variable == "n" and self.partition is not None:
            raise ValueError("an n sweep cannot carry a fixed partition")
        if self.variable == "partition-skew":
            if any(not 0.0 < v < 1.0 for v in self.values):
                raise ValueError("partition-skew values are p_1 in (0, 1)")
            if self.marked_subset not in (1, 2):
                raise ValueError("partition-skew uses two subsets")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentSpec":
        data = dict(data)
        if "eps" in data:
            data["epsilon"] = data.pop("eps")
        part = data.get("partition")
        if isinstance(part, str):
            data["partition"] = model.parse_partition(part)
        elif isinstance(part, list):
            data["partition"] = model.partition_from_json(part)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown experiment fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ExperimentSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class SweepRow:
    variable: str
    value: float
    n: int | None = None
    eps: float | None = None
    scale: float | None = None
    kind: str = ""
    a_m: float | None = None
    T_exact: float | None = None
    T_approx: float | None = None
    fidelity: float | None = None
    norm_drift: float | None = None
    mean_time: float | None = None
    grover_iterations: int | None = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


SWEEP_COLUMNS = tuple(f.name for f in fields(SweepRow))


def _row_problem(spec: ExperimentSpec, value: float):
    """(n, eps, c, a_m, partition) for one sweep value."""
    n, eps, c, part = spec.n, spec.epsilon, spec.scale, spec.partition
    if spec.variable == "n":
        n = int(value)
        if n != value:
            raise ValueError(f"n must be an integer, got {value!r}")
    elif spec.variable == "eps":
        eps = float(value)
    elif spec.variable == "scale":
        c = float(value)
    else:
        half = n // 2
        part = model.PriorPartition(n, ((half, float(value)), (n - half, 1.0 - float(value))))
    if part is not None:
        if part.n_total != n:
            raise ValueError(f"partition covers {part.n_total} items, not n={n}")
        marked = part.block(spec.marked_subset)[0]
        a_m = model.build_prior_state(part, marked, spec.marked_subset).a_m
    else:
        a_m = model.uniform_state(n, 1).a_m
    return n, eps, c, a_m, part


def compute_row(spec: ExperimentSpec, value: float) -> SweepRow:
    row = SweepRow(spec.variable, value, kind=spec.kind)
    try:
        n, eps, c, a_m, part = _row_problem(spec, value)
        row.n, row.eps, row.scale, row.a_m = n, eps, c, a_m
        s = sched.Schedule.local(a_m, eps, c)
        if spec.kind == "linear":
            s = sched.Schedule.linear(a_m, eps, c)
        row.T_exact = s.total_time
        row.T_approx = sched.approx_total_time(a_m, eps, c)
        if part is not None:
            row.mean_time = sched.mean_time(part, eps) / c
        row.grover_iterations = baseline.grover_optimal_iterations(n)
        if spec.fidelity:
            result = dynamics.evolve(spectral.EffectiveHamiltonian(a_m, c), s, trace_samples=0)
            row.fidelity, row.norm_drift = result.fidelity, result.norm_drift
            if not 0.0 <= row.fidelity <= 1.0 + 1e-9:
                raise ValueError(f"fidelity {row.fidelity} outside [0, 1]")
    except (ValueError, dynamics.ConvergenceError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def sweep(spec: ExperimentSpec) -> list[SweepRow]:
    """One row per sweep value, in input order regardless of ``workers``."""
    if spec.workers == 1:
        rows = [compute_row(spec, v) for v in spec.values]
    else:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(compute_row, [spec] * len(spec.values), spec.values))
    if spec.output:
        Path(spec.output).write_text(rows_to_csv(rows))
    return rows


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        d = asdict(row)
        writer.writerow([_fmt(d[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# invariant suites


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance

    @property
    def margin(self) -> float:
        return self.tolerance - self.error


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            out.append(
                f"{flag}  {c.suite:<9} {c.name:<44} err={c.error:.3e} tol={c.tolerance:.1e}"
                + (f"  {c.detail}" if c.detail else "")
            )
        return out


def _spectral_checks() -> list[Check]:
    out = []
    state = model.uniform_state(64, 7)
    h = spectral.EffectiveHamiltonian(state.a_m)
    worst_low = worst_rest = 0.0
    for s in np.linspace(0.0, 1.0, 11):
        # lambda2 <= c, so the sorted spectrum is [lambda1, lambda2, c, ..., c]
        full = spectral.full_spectrum(state, float(s), 1.0)
        lo, hi = spectral.eigenvalues(h, float(s))
        worst_low = max(worst_low, abs(full[0] - lo), abs(full[1] - hi))
        worst_rest = max(worst_rest, float(np.max(np.abs(full[2:] - 1.0))))
    out.append(Check("spectral", "full vs 2-D eigenvalues (N=64)", worst_low, 1e-10))
    out.append(Check("spectral", "degenerate sector at c (N=64)", worst_rest, 1e-10))

    ss = np.linspace(0.0, 1.0, 1001)
    for a in (0.05, 0.3, 0.8):
        hh = spectral.EffectiveHamiltonian(a, 2.5)
        gaps = np.array([spectral.gap(hh, float(s)) for s in ss])
        out.append(Check("spectral", f"gap symmetry a={a}", float(np.max(np.abs(gaps - gaps[::-1]))), 1e-14))
        out.append(Check("spectral", f"gap minimum c*a_m at s=1/2, a={a}",
                         abs(gaps.min() - 2.5 * a) + abs(ss[gaps.argmin()] - 0.5), 1e-14))
        trace = max(abs(sum(spectral.eigenvalues(hh, float(s))) - 2.5) for s in ss[::50])
        out.append(Check("spectral", f"trace identity a={a}", trace, 1e-14))
        vec_diff = max(
            float(np.max(np.abs(spectral.eigenvectors(hh, float(s)) - spectral.eigenvectors(hh.with_scale(1.0), float(s)))))
            for s in ss[::100]
        )
        out.append(Check("spectral", f"eigenvectors independent of c, a={a}", vec_diff, 1e-14))
    return out


def _schedule_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    worst = 0.0
    for _ in range(20):
        a, eps = float(rng.uniform(0.01, 0.95)), float(rng.uniform(0.005, 0.5))
        exact = sched.total_time(a, eps)
        worst = max(worst, abs(exact - sched.local_time_numeric(a, eps)) / exact)
    out.append(Check("schedule", "closed form vs quadrature (rel)", worst, 1e-8))

    s_loc = sched.Schedule.local(0.1, 0.05)
    xs = rng.uniform(0.0, 1.0, 1000)
    rt = max(abs(s_loc.s_of_t(s_loc.t_of_s(float(x))) - x) for x in xs)
    out.append(Check("schedule", "s_of_t round trip", rt, 1e-10))
    sym = max(abs(s_loc.t_of_s(float(x)) + s_loc.t_of_s(1.0 - float(x)) - s_loc.total_time) for x in xs)
    out.append(Check("schedule", "t(s) + t(1-s) = T", sym / s_loc.total_time, 1e-12))

    worst_fd = 0.0
    for x in np.linspace(0.01, 0.99, 100):
        x, d = float(x), 1e-6
        fd = (s_loc.t_of_s(x + d) - s_loc.t_of_s(x - d)) / (2 * d)
        want = 1.0 / (0.05 * spectral.unit_gap(0.1, x) ** 2)
        worst_fd = max(worst_fd, abs(fd - want) / want)
    out.append(Check("schedule", "dt/ds = 1/(eps c g^2) by finite differences", worst_fd, 1e-6))

    rep = sched.adiabaticity_report(s_loc, 401)
    out.append(Check("schedule", "local condition holds (worst ratio - 1)",
                     max(0.0, rep.worst_local_ratio - 1.0), 1e-12,
                     f"worst ratio {rep.worst_local_ratio:.6f}"))
    return out


def _dynamics_checks() -> list[Check]:
    out = []
    state = model.uniform_state(16, 3)
    s = sched.Schedule.for_state(state, 0.05)
    h = spectral.EffectiveHamiltonian(state.a_m)
    r2 = dynamics.evolve(h, s)
    rf = dynamics.evolve_full(state, s)
    out.append(Check("dynamics", "norm drift (2-D)", r2.norm_drift, 1e-9))
    out.append(Check("dynamics", "full vs 2-D fidelity (N=16)", abs(r2.fidelity - rf.fidelity), 1e-8))
    out.append(Check("dynamics", "leakage out of span{m, psi0} (N=16)", rf.leakage, 1e-9))
    eps = s.epsilon
    out.append(Check("dynamics", "min ground-state overlap >= 1 - 10 eps^2",
                     max(0.0, (1 - 10 * eps * eps) - r2.min_overlap), 0.0,
                     f"min overlap {r2.min_overlap:.8f}"))
    out.append(Check("dynamics", "rescaled run agrees per amplitude", _rescale_error(64, 0.05, 5.0), 1e-10))
    return out


def _rescale_error(n: int, eps: float, c: float) -> float:
    """Largest amplitude difference between psi_cH(T/c) and psi_H(T) on a shared grid."""
    a = 1.0 / math.sqrt(n)
    r1 = dynamics.evolve(spectral.EffectiveHamiltonian(a), sched.Schedule.local(a, eps), trace_samples=0)
    hc = spectral.EffectiveHamiltonian(a, c)
    sc = sched.Schedule.local(a, eps, c)
    rc = dynamics.propagate(hc, lambda ts: sched.s_values(sc, ts), sc.total_time,
                            hc.initial_state(), r1.steps)
    return float(np.max(np.abs(rc.final_state - r1.final_state)))


def _theorem_checks(rng: np.random.Generator) -> list[Check]:
    out = []
    # equal a_m, different remaining amplitudes
    rest = rng.uniform(0.1, 1.0, 15)
    rest *= math.sqrt(1 - 0.25**2) / np.linalg.norm(rest)
    lopsided = model.InitialState(np.insert(rest, 4, 0.25), 5)
    uniform = model.uniform_state(16, 1)
    s1 = sched.Schedule.for_state(uniform, 0.05)
    s2 = sched.Schedule.for_state(lopsided, 0.05)
    f1 = dynamics.evolve_full(uniform, s1).fidelity
    f2 = dynamics.evolve_full(lopsided, s2).fidelity
    out.append(Check("theorems", "equal a_m: identical T", float(s1.total_time != s2.total_time), 0.0))
    out.append(Check("theorems", "equal a_m: equal fidelity", abs(f1 - f2), 1e-8))

    n, eps = 1024, 0.05
    bound = sched.no_prior_time(n, eps)
    worst = 0.0
    for _ in range(200):
        part = random_partition(rng, n, int(rng.integers(1, 11)))
        worst = max(worst, sched.mean_time(part, eps) - bound)
    out.append(Check("theorems", "mean time <= (pi/2eps) sqrt(N)", max(0.0, worst), 1e-9))
    prop = model.PriorPartition.proportional([100, 300, 624])
    out.append(Check("theorems", "equality for proportional prior",
                     abs(sched.mean_time(prop, eps) - bound), 1e-9))

    a = 0.1
    base = sched.total_time(a, eps)
    scaled = max(abs(sched.total_time(a, eps, c) * c - base) / base for c in (0.5, 2.0, 10.0, 32.0))
    out.append(Check("theorems", "T(c) * c constant", scaled, 1e-12))
    out.append(Check("theorems", "dynamics rescaling (c=5)", _rescale_error(64, 0.05, 5.0), 1e-10))
    return out


def random_partition(rng: np.random.Generator, n_total: int, k: int) -> model.PriorPartition:
    """Random sizes (each >= 1) and Dirichlet probabilities; sum(p) = 1 exactly
    up to the validation tolerance."""
    cuts = np.sort(rng.choice(np.arange(1, n_total), size=k - 1, replace=False)) if k > 1 else []
    sizes = np.diff(np.concatenate([[0], cuts, [n_total]])).astype(int)
    p = rng.dirichlet(np.ones(k))
    p = np.maximum(p, 1e-6)
    p /= p.sum()
    p[-1] = 1.0 - math.fsum(p[:-1])
    return model.PriorPartition(n_total, tuple(zip(sizes.tolist(), p.tolist())))


SUITES: dict[str, Callable[[np.random.Generator], list[Check]]] = {
    "spectral": lambda rng: _spectral_checks(),
    "schedule": _schedule_checks,
    "dynamics": lambda rng: _dynamics_checks(),
    "theorems": _theorem_checks,
}


def verify(suite: str = "all", seed: int = 20240101) -> VerifyReport:
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    names = list(SUITES) if suite == "all" else [suite]
    report = VerifyReport()
    for name in names:
        report.checks.extend(SUITES[name](np.random.default_rng(seed)))
    return report


# ---------------------------------------------------------------------------
# reproduction table


@dataclass(frozen=True)
class TableRow:
    section: str
    label: str
    value: float
    reference: float
    note: str = ""

    @property
    def rel_diff(self) -> float:
        return abs(self.value - self.reference) / abs(self.reference)


def reproduce_paper(epsilon: float = 0.05) -> list[TableRow]:
    rows: list[TableRow] = []
    for n in (64, 256, 1024, 4096):
        a = 1.0 / math.sqrt(n)
        rows.append(TableRow("uniform", f"T_exact N={n}", sched.total_time(a, epsilon),
                             sched.no_prior_time(n, epsilon), "reference (pi/2eps) sqrt(N)"))

    n = 1000
    part = model.PriorPartition(n, ((500, 0.8), (500, 0.2)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        single = sched.theorem2_time(model.PriorPartition.uniform(n), 1, epsilon)
    rows.append(TableRow("prior", "k=1 partition time", single, sched.no_prior_time(n, epsilon),
                         "no prior information"))
    t_cond = sched.theorem2_time(part, 1, epsilon)
    rows.append(TableRow("prior", "80/20: T given m in A1", t_cond, 785.3981633974483))
    rows.append(TableRow("prior", "80/20: conditional ratio", t_cond / sched.no_prior_time(n, epsilon),
                         math.sqrt(0.5 / 0.8), "'about 20 percent faster' reading"))
    t_mean = sched.mean_time(part, epsilon)
    rows.append(TableRow("prior", "80/20: mean time", t_mean, 942.4777960769379))
    rows.append(TableRow("prior", "80/20: mean ratio", t_mean / sched.no_prior_time(n, epsilon),
                         (math.sqrt(0.4) + math.sqrt(0.1)) / math.sqrt(2 * 0.5),
                         "prior-averaged reading"))
    t_exact = sched.theorem2_time(part, 1, epsilon, exact=True)
    rows.append(TableRow("prior", "80/20: exact conditional ratio",
                         t_exact / sched.total_time(1 / math.sqrt(n), epsilon), math.sqrt(0.5 / 0.8),
                         "arctan closed form"))

    target = math.pi / (2 * epsilon)
    for n in (64, 256, 1024):
        a = 1.0 / math.sqrt(n)
        c = math.sqrt(n)
        rows.append(TableRow("constant", f"T_exact c=sqrt(N), N={n}", sched.total_time(a, epsilon, c),
                             target, "reference pi/2eps"))
        rows.append(TableRow("constant", f"T_approx c=sqrt(N), N={n}",
                             sched.approx_total_time(a, epsilon, c), target))
    return rows


def format_table(rows: Sequence[TableRow]) -> str:
    lines = [f"{'section':<9} {'quantity':<32} {'value':>14} {'reference':>14} {'rel diff':>9}  note"]
    for r in rows:
        lines.append(
            f"{r.section:<9} {r.label:<32} {r.value:>14.6f} {r.reference:>14.6f} {r.rel_diff:>9.2%}  {r.note}"
        )
    return "\n".join(lines)


def table_to_csv(rows: Sequence[TableRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "label", "value", "reference", "rel_diff", "note"])
    for r in rows:
        writer.writerow([r.section, r.label, repr(r.value), repr(r.reference), repr(r.rel_diff), r.note])
    return buf.getvalue()


def with_overrides(spec: ExperimentSpec, **overrides: Any) -> ExperimentSpec:
    """Copy of ``spec`` with non-None overrides applied (CLI flags win)."""
    return replace(spec, **{k: v for k, v in overrides.items() if v is not None})

import json
import math

import pytest

from adiasearch.experiments import (
    CSV_VERSION,
    SWEEP_COLUMNS,
    ExperimentSpec,
    format_table,
    reproduce_paper,
    rows_to_csv,
    sweep,
    table_to_csv,
    verify,
)
from adiasearch.model import PriorPartition


def test_n_sweep_approaches_quadratic_scaling():
    rows = sweep(ExperimentSpec("n", (16, 64, 256, 1024), epsilon=0.05, fidelity=False))
    assert all(r.ok for r in rows)
    exact = [r.T_exact for r in rows]
    ratios = [b / a for a, b in zip(exact, exact[1:])]
    # ratio exceeds 2 by about a_N / pi and shrinks toward 2 as N grows
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    for r, row in zip(ratios, rows):
        assert 2.0 < r < 2.0 + row.a_m
    approx = [r.T_approx for r in rows]
    for a, b in zip(approx, approx[1:]):
        assert b / a == pytest.approx(2.0, rel=1e-13)
    assert [r.grover_iterations for r in rows] == [3, 6, 12, 25]


def test_scale_sweep_halves_time_keeps_fidelity():
    rows = sweep(ExperimentSpec("scale", (1, 2, 4), n=64, epsilon=0.05))
    for a, b in zip(rows, rows[1:]):
        assert b.T_exact == pytest.approx(a.T_exact / 2, rel=1e-14)
        assert b.fidelity == pytest.approx(a.fidelity, abs=1e-8)


def test_partition_skew_mean_time_peaks_at_proportional():
    values = (0.5, 0.6, 0.7, 0.8, 0.9)
    rows = sweep(ExperimentSpec("partition-skew", values, n=1000, fidelity=False))
    means = [r.mean_time for r in rows]
    assert means.index(max(means)) == 0
    assert means[0] == pytest.approx(math.pi / 0.1 * math.sqrt(1000), rel=1e-14)
    assert all(b < a for a, b in zip(means, means[1:]))
    # marked item in the favoured half: a_m^2 = p_1 / 500
    for v, r in zip(values, rows):
        assert r.a_m ** 2 == pytest.approx(v / 500, rel=1e-14)


def test_eps_sweep_with_fixed_partition():
    part = PriorPartition(64, ((16, 0.5), (48, 0.5)))
    rows = sweep(ExperimentSpec("eps", (0.1, 0.05), n=64, partition=part))
    assert all(r.ok for r in rows)
    assert rows[0].a_m == pytest.approx(math.sqrt(0.5 / 16))
    assert rows[1].T_exact == pytest.approx(2 * rows[0].T_exact, rel=1e-14)
    assert rows[0].mean_time is not None


def test_sweep_rows_are_valid():
    rows = sweep(ExperimentSpec("eps", (0.1, 0.05, 0.02), n=128))
    for r in rows:
        assert r.T_exact > 0 and 0.0 <= r.fidelity <= 1.0 and r.norm_drift < 1e-9
    assert "nan" not in rows_to_csv(rows).lower()


def test_failed_row_does_not_stop_sweep():
    rows = sweep(ExperimentSpec("n", (16, 1, 64), fidelity=False))
    assert [r.ok for r in rows] == [True, False, True]
    assert "ValueError" in rows[1].error
    line = rows_to_csv(rows).splitlines()[3]
    assert line.startswith("n,1.0,") and "ValueError" in line


def test_csv_layout_and_determinism(tmp_path):
    spec = ExperimentSpec("n", (16, 64), fidelity=True, output=str(tmp_path / "a.csv"))
    sweep(spec)
    first = (tmp_path / "a.csv").read_bytes()
    sweep(spec)
    assert (tmp_path / "a.csv").read_bytes() == first
    lines = first.decode().splitlines()
    assert lines[0] == f"# {CSV_VERSION}"
    assert lines[1].split(",") == list(SWEEP_COLUMNS)
    assert len(lines) == 4


def test_parallel_sweep_preserves_order():
    values = (256, 16, 64)
    serial = rows_to_csv(sweep(ExperimentSpec("n", values, workers=1)))
    parallel = rows_to_csv(sweep(ExperimentSpec("n", values, workers=3)))
    assert serial == parallel


def test_spec_from_json(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({
        "variable": "eps", "values": [0.1], "n": 1000, "eps": 0.2,
        "partition": [{"p": 0.8, "n": 500}, {"p": 0.2, "n": 500}],
    }))
    spec = ExperimentSpec.from_json_file(path)
    assert spec.partition == PriorPartition(1000, ((500, 0.8), (500, 0.2)))
    assert spec.epsilon == 0.2 and spec.values == (0.1,)
    with pytest.raises(ValueError):
        ExperimentSpec.from_dict({"variable": "eps", "values": [0.1], "colour": "red"})


@pytest.mark.parametrize("kwargs", [
    dict(variable="temperature", values=(1,)),
    dict(variable="n", values=()),
    dict(variable="partition-skew", values=(1.0,)),
    dict(variable="n", values=(4,), partition=PriorPartition.uniform(4)),
    dict(variable="eps", values=(0.1,), workers=0),
])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentSpec(**kwargs)


@pytest.mark.parametrize("suite", ["spectral", "schedule", "dynamics", "theorems"])
def test_verify_suites_pass(suite):
    report = verify(suite)
    assert report.checks and report.passed, "\n".join(report.lines())
    assert all(c.suite == suite for c in report.checks)


def test_verify_all_and_unknown():
    report = verify("all")
    assert {c.suite for c in report.checks} == {"spectral", "schedule", "dynamics", "theorems"}
    assert any("N=64" in c.name for c in report.checks if c.suite == "spectral")
    with pytest.raises(ValueError):
        verify("everything")


def test_reproduce_paper_table():
    rows = {r.label: r for r in reproduce_paper()}
    assert rows["80/20: conditional ratio"].value == pytest.approx(0.7906, abs=1e-4)
    assert rows["80/20: mean ratio"].value == pytest.approx(0.9487, abs=1e-4)
    assert rows["k=1 partition time"].rel_diff < 1e-15
    for n in (64, 256, 1024):
        assert rows[f"T_approx c=sqrt(N), N={n}"].value == pytest.approx(math.pi / 0.1, rel=1e-14)
    text = format_table(list(rows.values()))
    assert "conditional ratio" in text
    assert table_to_csv(list(rows.values())).startswith("section,label,value")

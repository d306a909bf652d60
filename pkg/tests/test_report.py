"""Tests for the deterministic CSV / JSON / SVG artifact writers."""

import json

import pytest

from iswapdd.ensemble import ErrorEstimate, RunConfig
from iswapdd.errors import ValidationError
from iswapdd.model import GateParams
from iswapdd.noise import NoiseSpec
from iswapdd.report import (
    CSV_HEADER,
    decade_gridlines,
    emit_csv,
    emit_fit_svg,
    emit_manifest,
    emit_simple_csv,
    emit_spectrum_svg,
    emit_svg_plot,
    read_csv,
    render_text,
    result_rows,
)
from iswapdd.sequences import SequenceSpec


def make_result(n, mean, seed=7040412, sigma1=1e9):
    cfg = RunConfig(
        gate=GateParams(omega=1e11, omega_c=5e9),
        noise1=NoiseSpec(
            variant="one_over_f",
            sigma=sigma1,
            gamma_min=1.0,
            gamma_max=1e6,
            fluctuators_per_decade=20,
        ),
        noise2=NoiseSpec(
            variant="one_over_f",
            sigma=1e9,
            gamma_min=1.0,
            gamma_max=1e6,
            fluctuators_per_decade=20,
        ),
        sequence=(
            SequenceSpec("none", "z", 0) if n == 0 else SequenceSpec("pdd", "z", 2 * n)
        ),
        trajectories=100,
        master_seed=seed,
    )
    estimate = ErrorEstimate(
        mean=mean,
        std_error=mean / 10.0,
        n_trajectories=100,
        master_seed=seed,
        wall_time=0.1,
    )
    return (cfg, estimate)


@pytest.fixture
def sample_rows():
    results = [make_result(4, 1e-6), make_result(0, 3e-5), make_result(2, 8e-6)]
    return result_rows(results)


def test_result_rows_columns_and_order(sample_rows):
    assert [tuple(r) for r in sample_rows] == [CSV_HEADER] * 3
    assert [r["n"] for r in sample_rows] == [0, 2, 4]
    assert sample_rows[0]["sequence"] == "none"
    assert sample_rows[1]["sequence"] == "pdd"
    assert sample_rows[1]["N"] == 100
    assert sample_rows[1]["seed"] == 7040412
    assert sample_rows[1]["gamma_max"] == 1e6


def test_render_text_uses_header_and_reprs(sample_rows):
    text = render_text(sample_rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 4
    assert lines[1].startswith("0,3e-05,")
    assert "100000000000.0" in lines[1]


def test_csv_round_trip(tmp_path, sample_rows):
    path = tmp_path / "table.csv"
    emit_csv(str(path), sample_rows)
    raw = path.read_bytes()
    assert raw.count(b"\r\n") == 4
    rows = read_csv(str(path))
    assert rows == sample_rows


def test_csv_bytes_are_deterministic(tmp_path, sample_rows):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(str(a), sample_rows)
    emit_csv(str(b), sample_rows)
    assert a.read_bytes() == b.read_bytes()


def test_csv_validation(tmp_path, sample_rows):
    with pytest.raises(ValidationError):
        emit_csv(str(tmp_path / "empty.csv"), [])
    broken = [dict(sample_rows[0])]
    del broken[0]["sigma2"]
    with pytest.raises(ValidationError):
        emit_csv(str(tmp_path / "broken.csv"), broken)


def test_read_csv_rejects_foreign_tables(tmp_path):
    foreign = tmp_path / "foreign.csv"
    foreign.write_text("a,b\r\n1,2\r\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        read_csv(str(foreign))
    empty = tmp_path / "headeronly.csv"
    empty.write_text(",".join(CSV_HEADER) + "\r\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        read_csv(str(empty))


def test_manifest_is_sorted_and_deterministic(tmp_path, sample_rows):
    config = {"run": {"seed": 7040412}, "unit": "rad/s"}
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    emit_manifest(str(a), config, sample_rows, extra={"fit": {"alpha": 2.0}})
    emit_manifest(str(b), config, sample_rows, extra={"fit": {"alpha": 2.0}})
    assert a.read_bytes() == b.read_bytes()
    document = json.loads(a.read_text(encoding="utf-8"))
    assert set(document) == {"config", "rows", "fit"}
    assert document["rows"][0]["n"] == 0
    assert list(document) == sorted(document)


def test_simple_csv(tmp_path):
    path = tmp_path / "spectrum.csv"
    emit_simple_csv(str(path), ("omega", "psd"), [(1e4, 2.5e8), (1e5, 2.5e7)])
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "omega,psd"
    assert "10000.0,250000000.0" in text
    with pytest.raises(ValidationError):
        emit_simple_csv(str(tmp_path / "none.csv"), ("a",), [])


def test_decade_gridlines_half_open():
    assert decade_gridlines(1e-6, 1e-2) == [1e-5, 1e-4, 1e-3, 1e-2]
    assert len(decade_gridlines(1e-6, 1e-2)) == 4
    assert decade_gridlines(1.0, 1000.0) == [10.0, 100.0, 1000.0]
    assert decade_gridlines(5e-7, 2e-3) == [1e-6, 1e-5, 1e-4, 1e-3]
    assert decade_gridlines(3.0, 9.0) == []
    with pytest.raises(ValidationError):
        decade_gridlines(0.0, 1.0)
    with pytest.raises(ValidationError):
        decade_gridlines(1.0, 0.5)


def test_svg_plot_deterministic_with_decade_guides(tmp_path):
    results = [make_result(2, 4.2e-5), make_result(8, 9.0e-7), make_result(4, 6e-6)]
    rows = result_rows(results)
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_svg_plot(str(a), rows)
    emit_svg_plot(str(b), rows)
    content = a.read_bytes()
    assert content == b.read_bytes()
    assert content.startswith(b"<?xml")
    # Data spans 9e-7 .. 4.2e-5: decades at 1e-6 and 1e-5 get guide lines.
    assert b'id="decade-1e-06"' in content
    assert b'id="decade-1e-05"' in content


def test_svg_plot_skips_unplottable_points(tmp_path, sample_rows):
    rows = list(sample_rows)  # n = 0 cannot sit on a log axis
    emit_svg_plot(str(tmp_path / "ok.svg"), rows)
    with pytest.raises(ValidationError):
        emit_svg_plot(str(tmp_path / "few.svg"), rows[:2])


def test_fit_svg(tmp_path):
    from iswapdd.analytics import fit_power_law

    results = [make_result(n, 3e-4 * n**-2.0) for n in (2, 4, 8, 16)]
    rows = result_rows(results)
    fit = fit_power_law([(r["n"], r["mean_error"], r["std_error"]) for r in rows])
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_fit_svg(str(a), rows, fit)
    emit_fit_svg(str(b), rows, fit)
    assert a.read_bytes() == b.read_bytes()


def test_spectrum_svg(tmp_path):
    omega = [1e4, 1e5, 1e6]
    psd = [2.3e13, 2.2e12, 2.4e11]
    model = [2.27e13, 2.27e12, 2.27e11]
    path = tmp_path / "spectrum.svg"
    emit_spectrum_svg(str(path), omega, psd, model)
    assert path.read_bytes().startswith(b"<?xml")
    with pytest.raises(ValidationError):
        emit_spectrum_svg(str(tmp_path / "bad.svg"), [1e4], [1.0], [1.0])

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsesec import rates
from sparsesec.config import SystemConfig
from sparsesec.errors import ConfigError, UnsupportedRegimeError
from sparsesec.experiments import (
    SweepSpec,
    beam_selection_compare,
    evaluate_point,
    read_sweep_csv,
    run_sweep,
    spec_from_header,
    spec_to_header,
)
from sparsesec.figures import FIGURE_PARAMETERS, FIGURES, figure_spec, stated_parameters_hold
from sparsesec.scheme import leakage
from sparsesec.selection import selection_secrecy_rate

BASE = SystemConfig.symmetric(64, m_t=4, m_r=8, m_e=8, l_t=16, power=10.0, phi=0.6, eta=0.1)
SMALL = SystemConfig.symmetric(16, m_t=4, m_r=4, m_e=4, l_t=6, power=10.0, phi=0.6, eta=0.1)


def _spec(**kw):
    args = dict(base=BASE, axis="snr_db", grid=(0.0, 10.0), methods=("theorem1",), trials=20, seed=5)
    args.update(kw)
    return SweepSpec(**args)


# --------------------------------------------------------------------------
# Sweep validation


def test_grid_must_be_strictly_increasing():
    with pytest.raises(ConfigError, match="strictly increasing"):
        _spec(grid=(10.0, 0.0))
    with pytest.raises(ConfigError, match="strictly increasing"):
        _spec(grid=(1.0, 1.0))


def test_empty_grid_rejected():
    with pytest.raises(ConfigError, match="empty"):
        _spec(grid=())


def test_unknown_method_and_axis_rejected():
    with pytest.raises(ConfigError, match="unknown method"):
        _spec(methods=("magic",))
    with pytest.raises(ConfigError, match="axis"):
        _spec(axis="n_t")


def test_curve_may_not_override_axis():
    with pytest.raises(ConfigError, match="axis"):
        _spec(curves=({"snr_db": 3.0},))


def test_integer_axis_rejects_fractional_values():
    with pytest.raises(ConfigError):
        _spec(axis="m_t", grid=(2, 2.5))


def test_invalid_grid_point_names_the_point():
    spec = _spec(axis="m_t", grid=(4, 8, 20))
    with pytest.raises(ConfigError, match=r"m_t=20"):
        run_sweep(spec, workers=1)


def test_invalid_point_in_curve_names_curve():
    spec = _spec(axis="l_t", grid=(8, 16), curves=({"m_t": 4}, {"m_t": 10}))
    with pytest.raises(ConfigError, match=r"l_t=8 \(m_t=10\)"):
        run_sweep(spec, workers=1)


# --------------------------------------------------------------------------
# Evaluation


def test_singleton_grid_matches_direct_calls():
    spec = _spec(grid=(10.0,), methods=("monte-carlo", "theorem1", "bound-low", "leakage-an-bob"))
    result = run_sweep(spec, workers=1)
    assert len(result.rows) == 1
    cfg = BASE.replace(snr_db=10.0)
    mc = rates.rate_monte_carlo(cfg, 20, 5, 1)
    assert result.column("monte-carlo")[0] == mc.r_s
    assert result.column("monte-carlo_std_err")[0] == mc.std_err
    assert result.column("theorem1")[0] == rates.rate_theorem1(cfg).r_s
    assert result.column("bound-low")[0] == rates.bound_low(cfg)
    assert result.column("leakage-an-bob")[0] == leakage(cfg).an_to_bob


def test_row_count_equals_grid_size_and_axis_column_first():
    spec = _spec(grid=(-5.0, 0.0, 5.0, 10.0), curves=({"eta": 0.05}, {"eta": 0.2}))
    result = run_sweep(spec, workers=1)
    assert len(result.rows) == 4
    assert result.columns == ("snr_db", "theorem1@eta=0.05", "theorem1@eta=0.2")
    assert list(result.column("snr_db")) == [-5.0, 0.0, 5.0, 10.0]


def test_curve_columns_match_per_curve_configs():
    spec = _spec(axis="l_t", grid=(12, 16, 20), curves=({"snr_db": 5.0}, {"snr_db": 15.0}))
    result = run_sweep(spec, workers=1)
    for snr_db in (5.0, 15.0):
        col = result.column(f"theorem1@snr_db={snr_db!r}")
        want = [rates.rate_theorem1(BASE.replace(snr_db=snr_db, l_t=l)).r_s for l in (12, 16, 20)]
        np.testing.assert_array_equal(col, want)


def test_undefined_method_gives_nan_cell():
    # chi_h needs rho < 1 - m_r/n_t; at rho = 0.9 with m_r/n_t = 1/8 it has no value.
    result = run_sweep(_spec(axis="rho", grid=(0.25, 0.9), methods=("chi-h",)), workers=1)
    col = result.column("chi-h")
    assert math.isfinite(col[0]) and math.isnan(col[1])
    assert result.to_csv().splitlines()[-1].endswith(",nan")


def test_mc_methods_share_seed_schedule_across_curves():
    # Identical curves produce identical MC columns only if every point uses the sweep seed.
    spec = _spec(methods=("monte-carlo",), curves=({"eta": 0.1}, {"phi": 0.6}))
    result = run_sweep(spec, workers=1)
    np.testing.assert_array_equal(result.column("monte-carlo@eta=0.1"), result.column("monte-carlo@phi=0.6"))


def test_fig2_theorem1_increases_then_saturates():
    spec = figure_spec("fig2", trials=1)
    spec = SweepSpec(base=spec.base, axis="snr_db", grid=tuple(range(-10, 51, 5)),
                     methods=("theorem1",), trials=1, seed=spec.seed, curves=spec.curves)
    result = run_sweep(spec, workers=1)
    for name in result.columns[1:]:
        col = result.column(name)
        steps = np.diff(col)
        # Clamped at zero at low SNR, strictly increasing once positive.
        assert np.all(steps >= 0)
        assert np.all(steps[col[:-1] > 0] > 0)
        # Saturation: past the steepest step the per-5-dB gain keeps shrinking.
        peak = int(np.argmax(steps))
        assert np.all(np.diff(steps[peak:]) < 0)
        assert steps[-1] < 0.01 * steps[peak]


def test_fig2_monte_carlo_increases_with_snr():
    spec = figure_spec("fig2", trials=100)
    spec = SweepSpec(base=spec.base, axis="snr_db", grid=(5.0, 10.0, 15.0, 20.0), methods=("monte-carlo",),
                     trials=100, seed=spec.seed, curves=spec.curves[:1])
    col = run_sweep(spec, workers=1).column("monte-carlo@l_t=28;l_r=28;l_e=28")
    assert np.all(np.diff(col) > 0)


# --------------------------------------------------------------------------
# CSV


def test_csv_layout():
    text = run_sweep(_spec(methods=("monte-carlo", "theorem1")), workers=1).to_csv()
    assert "\r" not in text and text.endswith("\n")
    lines = text.split("\n")[:-1]
    assert lines[0].startswith("# ")
    assert lines[1] == "snr_db,monte-carlo,monte-carlo_std_err,theorem1"
    for line in lines[2:]:
        for cell in line.split(",")[1:]:
            mantissa = cell.split("e")[0].lstrip("-").replace(".", "")
            assert len(mantissa) >= 9


def test_header_round_trip_rebuilds_spec():
    spec = _spec(axis="l_t", grid=(12, 16), methods=("theorem1", "chi-l"),
                 curves=({"snr_db": 2.0, "eta": 0.05}, {"rho": 0.3}))
    assert spec_from_header("# " + spec_to_header(spec)) == spec


def test_csv_file_round_trip(tmp_path):
    result = run_sweep(_spec(methods=("monte-carlo", "theorem1")), workers=1)
    path = tmp_path / "sweep.csv"
    result.write_csv(path)
    assert path.read_bytes() == result.to_csv().encode("utf-8")
    back = read_sweep_csv(path)
    assert back.spec == result.spec
    assert back.columns == result.columns
    np.testing.assert_allclose(np.array(back.rows, dtype=float), np.array(result.rows, dtype=float), rtol=1e-11)
    # The echoed sweep header is enough to re-run the sweep exactly.
    assert run_sweep(back.spec, workers=1).to_csv() == result.to_csv()


def test_csv_identical_across_worker_counts():
    spec = _spec(grid=(0.0, 5.0, 10.0), methods=("monte-carlo", "theorem1"), curves=({"eta": 0.1}, {"eta": 0.2}))
    one = run_sweep(spec, workers=1).to_csv()
    assert run_sweep(spec, workers=2).to_csv() == one
    assert run_sweep(spec, workers=3).to_csv() == one


def test_single_point_parallel_trials_identical():
    spec = _spec(grid=(10.0,), methods=("monte-carlo",), trials=30)
    assert run_sweep(spec, workers=2).to_csv() == run_sweep(spec, workers=1).to_csv()


@settings(max_examples=25, deadline=None)
@given(
    snr=st.lists(st.floats(-20, 40, allow_nan=False), min_size=1, max_size=4, unique=True),
    eta=st.sampled_from([0.05, 0.1, 0.3]),
)
def test_header_round_trip_property(snr, eta):
    spec = _spec(grid=tuple(sorted(snr)), curves=({"eta": eta},))
    assert spec_from_header(spec_to_header(spec)) == spec


# --------------------------------------------------------------------------
# Figure presets


@pytest.mark.parametrize("name", sorted(FIGURE_PARAMETERS))
def test_presets_carry_stated_parameters(name):
    assert stated_parameters_hold(name) == []


def test_every_preset_is_valid_and_covers_all_figures():
    assert sorted(FIGURES, key=lambda n: int(n[3:])) == [f"fig{i}" for i in range(2, 13)]
    for name in FIGURES:
        spec = figure_spec(name, trials=3, seed=1)
        assert spec.trials == 3 and spec.seed == 1


def test_preset_check_detects_mismatch(monkeypatch):
    monkeypatch.setitem(FIGURE_PARAMETERS, "fig3", {**FIGURE_PARAMETERS["fig3"], "n_t": 128})
    assert any("n_t" in p for p in stated_parameters_hold("fig3"))


def test_fig3_axis_and_curves():
    spec = figure_spec("fig3")
    assert spec.axis == "m_t"
    assert [c["snr_db"] for c in spec.curves] == [6.0, 7.0, 8.0]


def test_unknown_figure():
    with pytest.raises(KeyError):
        figure_spec("fig1")


# --------------------------------------------------------------------------
# Beam selection


def test_selection_strategies_coincide_when_nothing_to_choose():
    cfg = SystemConfig.symmetric(16, m_t=4, m_r=4, m_e=4, l_t=4, power=10.0, phi=0.6, eta=0.1)
    values = [selection_secrecy_rate(cfg, 30, 2, s) for s in ("random", "greedy", "exhaustive")]
    assert values[0] == values[1] == values[2]


def test_optimal_selection_beats_random():
    rand, _ = selection_secrecy_rate(SMALL, 100, 4, "random")
    greedy, _ = selection_secrecy_rate(SMALL, 100, 4, "greedy")
    best, _ = selection_secrecy_rate(SMALL, 100, 4, "exhaustive")
    assert best >= greedy and best >= rand
    assert greedy > rand


def test_greedy_within_five_percent_of_exhaustive():
    greedy, _ = selection_secrecy_rate(SMALL, 200, 3, "greedy")
    best, _ = selection_secrecy_rate(SMALL, 200, 3, "exhaustive")
    assert best >= greedy
    assert (best - greedy) / best <= 0.05


def test_exhaustive_beyond_cap_rejected():
    cfg = SystemConfig.symmetric(128, m_t=32, m_r=32, m_e=32, l_t=40, power=1.0, phi=0.6, eta=0.1)
    with pytest.raises(UnsupportedRegimeError, match="cap"):
        selection_secrecy_rate(cfg, 1, 0, "exhaustive")
    with pytest.raises(UnsupportedRegimeError):
        beam_selection_compare(cfg, 1, 0, "exhaustive")


def test_beam_selection_compare_matches_direct_call():
    result = beam_selection_compare(SMALL, 20, 9, "greedy", workers=1)
    mean, se = selection_secrecy_rate(SMALL, 20, 9, "greedy")
    assert result.rows == ((SMALL.snr_db, mean, se),)
    assert result.columns == ("snr_db", "selection-greedy", "selection-greedy_std_err")


def test_selection_unknown_strategy():
    with pytest.raises(ValueError):
        selection_secrecy_rate(SMALL, 1, 0, "psychic")


def test_evaluate_point_selection_columns():
    out = evaluate_point(SMALL, ("selection-random",), 10, 1)
    assert set(out) == {"selection-random", "selection-random_std_err"}

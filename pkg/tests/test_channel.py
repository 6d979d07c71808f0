import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsesec.channel import (
    beam_angles,
    check_pattern,
    complex_normal,
    read_channel_csv,
    sample_channels,
    sample_pattern,
    sample_slices,
    slice_channels,
    steering_matrix,
    to_physical,
    to_virtual,
    write_channel_csv,
    VirtualChannelPair,
)
from sparsesec.config import SystemConfig
from sparsesec.errors import ConfigError


def small(n_t=10, l_t=6, m=4, **kw):
    return SystemConfig.symmetric(n_t=n_t, m_t=m, m_r=m, m_e=m, l_t=l_t, power=1.0, **kw)


def test_full_dominant_set_is_forced():
    cfg = SystemConfig.symmetric(n_t=12, m_t=3, m_r=3, m_e=3, l_t=12, power=1.0)
    p = sample_pattern(cfg, 5)
    assert np.array_equal(p.u_t, np.arange(12)) and np.array_equal(p.e_t, np.arange(12))
    assert p.u_t_complement.size == 0


def test_pattern_is_deterministic():
    assert sample_pattern(small(), 42) == sample_pattern(small(), 42)
    assert sample_pattern(small(), 42) != sample_pattern(small(), 43)


@given(st.integers(2, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))).flatmap(
    lambda nl: st.tuples(st.just(nl[0]), st.just(nl[1]), st.integers(1, nl[1]))),
    st.integers(0, 2**63 - 1))
@settings(max_examples=150, deadline=None)
def test_pattern_invariants(dims, seed):
    n, l, m = dims
    cfg = SystemConfig.symmetric(n_t=n, m_t=m, m_r=m, m_e=m, l_t=l, power=1.0)
    p = sample_pattern(cfg, seed)
    check_pattern(cfg, p)
    assert set(p.u_t_sel) <= set(p.u_t) and set(p.e_r_sel) <= set(p.e_r)
    assert len(p.u_t_complement) == n - l


def _overlap_by_enumeration(n, l):
    subsets = list(itertools.combinations(range(n), l))
    total = sum(len(set(a) & set(b)) for a in subsets for b in subsets)
    return total / len(subsets) ** 2


def test_expected_overlap_matches_hypergeometric():
    exact = _overlap_by_enumeration(10, 6)
    assert exact == pytest.approx(3.6)
    overlaps = [np.intersect1d(p.u_t, p.e_t).size for p in (sample_pattern(small(), s) for s in range(4000))]
    se = np.std(overlaps) / math.sqrt(len(overlaps))
    assert abs(np.mean(overlaps) - exact) < 3 * se


def test_entry_variances():
    cfg = SystemConfig.symmetric(n_t=512, m_t=4, m_r=4, m_e=4, l_t=320, power=1.0, eta=0.1)
    p = sample_pattern(cfg, 1)
    pair = sample_channels(cfg, p, 2)
    dominant = np.zeros_like(pair.g, dtype=bool)
    dominant[np.ix_(p.u_r, p.u_t)] = True
    power = np.abs(pair.g) ** 2
    assert dominant.sum() >= 10**5 and (~dominant).sum() >= 10**5
    assert power[dominant].mean() == pytest.approx(1.0, rel=0.01)
    assert power[~dominant].mean() == pytest.approx(0.1, rel=0.01)
    eve_dom = np.zeros_like(pair.h, dtype=bool)
    eve_dom[np.ix_(p.e_r, p.e_t)] = True
    assert (np.abs(pair.h) ** 2)[eve_dom].mean() == pytest.approx(1.0, rel=0.01)


def test_signal_gram_tends_to_identity():
    cfg = SystemConfig.symmetric(n_t=64, m_t=4, m_r=16, m_e=4, l_t=24, power=1.0)
    acc = np.zeros((4, 4), dtype=complex)
    draws = 3000
    for s in range(draws):
        sl = slice_channels(sample_channels(cfg, sample_pattern(cfg, s), s + 10**6))
        acc += sl.g_bar.conj().T @ sl.g_bar / cfg.m_r
    assert np.max(np.abs(acc / draws - np.eye(4))) < 0.03


def test_channels_deterministic():
    cfg = small()
    p = sample_pattern(cfg, 3)
    a, b = sample_channels(cfg, p, 9), sample_channels(cfg, p, 9)
    assert np.array_equal(a.g, b.g) and np.array_equal(a.h, b.h)


def test_slice_shapes_and_entries():
    cfg = small(n_t=10, l_t=6, m=4)
    p = sample_pattern(cfg, 0)
    pair = sample_channels(cfg, p, 1)
    sl = slice_channels(pair)
    assert sl.g_bar.shape == (4, 4) and sl.g_hat.shape == (4, 4)
    assert sl.h_bar.shape == (4, 4) and sl.h_hat.shape == (4, 4)
    # Re-embedding the slices reproduces the original entries.
    rebuilt = np.full_like(pair.g, np.nan)
    rebuilt[np.ix_(p.u_r_sel, p.u_t_sel)] = sl.g_bar
    rebuilt[np.ix_(p.u_r_sel, p.u_t_complement)] = sl.g_hat
    mask = ~np.isnan(rebuilt)
    assert np.array_equal(rebuilt[mask], pair.g[mask])


def test_full_dominant_set_leaves_no_an_columns():
    cfg = SystemConfig.symmetric(n_t=8, m_t=2, m_r=2, m_e=2, l_t=8, power=1.0)
    sl = slice_channels(sample_channels(cfg, sample_pattern(cfg, 0), 0))
    assert sl.g_hat.shape == (2, 0) and sl.h_hat.shape == (2, 0)


def test_slice_dimension_mismatch():
    cfg = small()
    p = sample_pattern(cfg, 0)
    with pytest.raises(ConfigError):
        slice_channels(VirtualChannelPair(g=np.zeros((3, 3)), h=np.zeros((10, 10)), pattern=p, eta=0.1))


def test_fast_slices_match_full_realization_statistics():
    cfg = SystemConfig.symmetric(n_t=32, m_t=4, m_r=4, m_e=4, l_t=12, power=1.0, eta=0.1)
    p = sample_pattern(cfg, 11)
    rng = np.random.default_rng(5)
    fast = np.array([np.abs(sample_slices(cfg, p, rng).h_bar) ** 2 for _ in range(4000)]).mean(axis=(0, 1))
    full = np.array([np.abs(slice_channels(sample_channels(cfg, p, rng)).h_bar) ** 2
                     for _ in range(4000)]).mean(axis=(0, 1))
    expected = np.where(np.isin(p.u_t_sel, p.e_t), 1.0, 0.1)
    # e_r_sel rows are dominant for Eve only on e_t columns.
    np.testing.assert_allclose(fast, expected, rtol=0.1)
    np.testing.assert_allclose(full, expected, rtol=0.1)


def test_complex_normal_components():
    z = complex_normal(np.random.default_rng(0), 200000, 2.0)
    assert np.var(z.real) == pytest.approx(1.0, rel=0.02)
    assert np.var(z.imag) == pytest.approx(1.0, rel=0.02)
    assert abs(np.mean(z.real * z.imag)) < 0.01


def test_steering_single_element():
    np.testing.assert_allclose(steering_matrix(1), [[1.0]])


@pytest.mark.parametrize("n", [2, 7, 8, 64])
def test_steering_is_unitary(n):
    a = steering_matrix(n)
    np.testing.assert_allclose(a.conj().T @ a, np.eye(n), atol=1e-12)


def test_physical_round_trip():
    rng = np.random.default_rng(1)
    g = complex_normal(rng, (8, 16))
    a_r, a_t = steering_matrix(8), steering_matrix(16)
    np.testing.assert_allclose(to_virtual(to_physical(g, a_r, a_t), a_r, a_t), g, atol=1e-10)


def test_beam_angles():
    angles = beam_angles(8)
    assert np.all(np.isfinite(angles)) and np.all(np.diff(angles) > 0)
    assert np.isnan(beam_angles(8, spacing_ratio=0.1)).any()


def test_channel_csv_round_trip(tmp_path):
    g = complex_normal(np.random.default_rng(2), (3, 5))
    path = tmp_path / "g.csv"
    write_channel_csv(path, g)
    lines = path.read_text().splitlines()
    assert lines[0] == "i,j,re,im" and len(lines) == 16
    assert np.array_equal(read_channel_csv(path), g)

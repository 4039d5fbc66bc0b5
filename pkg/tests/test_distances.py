import math

import numpy as np
import pytest
from hypothesis import given
from scipy.stats import ks_2samp

from conftest import complete, graphs, make_graph, path
from spine.distances import (
    NETLSD_TIMES,
    heat_trace,
    jensen_shannon,
    ks_statistic,
    laplacian_spectrum,
    laplacian_spectrum_distance,
    netlsd_distance,
    netlsd_signature,
    portrait,
    portrait_divergence,
    write_signature_csv,
    write_spectrum,
)
from spine.filters import global_threshold
from spine.graph import degree_and_weight_sequences


def test_ks_trivial():
    assert ks_statistic([1, 2, 3], [1, 2, 3]) == 0
    assert ks_statistic([1, 2], [5, 6, 7]) == 1
    with pytest.raises(ValueError):
        ks_statistic([], [1])


@given(graphs(), graphs())
def test_ks_matches_scipy(g1, g2):
    a, b = g1.weight.tolist(), g2.weight.tolist()
    assert ks_statistic(a, b) == pytest.approx(ks_2samp(a, b, method="asymp").statistic)


def test_ks_karate_classical_threshold(karate):
    bb = global_threshold(karate, 0.3).graph
    d1, w1 = degree_and_weight_sequences(karate)
    d2, w2 = degree_and_weight_sequences(bb)
    assert abs(ks_statistic(d1, d2) - 0.339) <= 0.05
    assert abs(ks_statistic(w1, w2) - 0.644) <= 0.05


def test_portrait_rows(karate):
    B = portrait(karate)
    assert B[0, 1] == 34 and B[0].sum() == 34
    assert (B.sum(axis=1) == 34).all()
    assert B.shape[0] == 6


def test_portrait_small_oracle():
    P3 = path(3)
    K3 = complete(3)
    # rows l = 0, 1, 2 of the path portrait, columns k = 0, 1, 2
    assert portrait(P3).tolist() == [[0, 3, 0], [0, 2, 1], [1, 2, 0]]
    assert portrait(K3).tolist() == [[0, 3, 0], [0, 0, 3]]
    # P(l, k) proportional to k * B[l, k]; both totals are 9
    p = {(0, 1): 3 / 9, (1, 1): 2 / 9, (1, 2): 2 / 9, (2, 1): 2 / 9}
    q = {(0, 1): 3 / 9, (1, 2): 6 / 9}
    keys = set(p) | set(q)
    m = {k: 0.5 * (p.get(k, 0) + q.get(k, 0)) for k in keys}
    kl = lambda x: sum(v * math.log2(v / m[k]) for k, v in x.items() if v > 0)
    expect = 0.5 * kl(p) + 0.5 * kl(q)
    assert portrait_divergence(P3, K3) == pytest.approx(expect, abs=1e-12)


@given(graphs(), graphs())
def test_portrait_divergence_bounds_and_symmetry(g1, g2):
    d = portrait_divergence(g1, g2)
    assert 0 <= d <= 1
    assert d == pytest.approx(portrait_divergence(g2, g1), abs=1e-12)
    assert portrait_divergence(g1, g1) == 0


def test_jensen_shannon_disjoint_is_one():
    assert jensen_shannon(np.array([1.0, 0]), np.array([0, 1.0])) == pytest.approx(1)


def test_small_spectra():
    assert laplacian_spectrum(complete(3)) == pytest.approx([0, 3, 3])
    assert laplacian_spectrum(path(3)) == pytest.approx([0, 1, 3])
    assert laplacian_spectrum_distance(path(3), complete(3)) == pytest.approx(2, abs=1e-12)


def test_spectrum_padding_oracle():
    k3_k2 = make_graph(5, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (3, 4, 1)])
    # {0,0,0,3,3} (K3 padded with absent-node zeros) vs {0,0,2,3,3}
    assert laplacian_spectrum_distance(complete(3), k3_k2) == pytest.approx(2, abs=1e-12)


@given(graphs())
def test_spectrum_invariants(g):
    s = laplacian_spectrum(g)
    assert s[0] == pytest.approx(0, abs=1e-8)
    assert (np.diff(s) >= 0).all()
    assert int((np.abs(s) < 1e-8).sum()) == len(g.connected_components())
    assert s.sum() == pytest.approx(2 * g.n_edges, rel=1e-6)


@given(graphs(), graphs())
def test_spectral_distances_symmetric(g1, g2):
    assert laplacian_spectrum_distance(g1, g2) == pytest.approx(laplacian_spectrum_distance(g2, g1))
    assert netlsd_distance(g1, g2) == pytest.approx(netlsd_distance(g2, g1))
    assert laplacian_spectrum_distance(g1, g1) == 0 and netlsd_distance(g1, g1) == 0


def test_netlsd_grid():
    assert NETLSD_TIMES.shape == (250,)
    assert NETLSD_TIMES[0] == pytest.approx(1e-2) and NETLSD_TIMES[-1] == pytest.approx(1e2)


SPARSE = [complete(3), path(4), path(6), make_graph(6, [(i, (i + 1) % 6, 1) for i in range(6)]),
          make_graph(5, [(0, i, 1) for i in range(1, 5)]), make_graph(5, [(0, 1, 1), (1, 2, 1), (3, 4, 1)])]


@pytest.mark.parametrize("g", SPARSE)
def test_netlsd_limits_on_sparse_graphs(g):
    s = laplacian_spectrum(g)
    h = netlsd_signature(g)
    assert abs(h[0] - g.n_nodes) / g.n_nodes <= 0.02
    gap = s[s > 1e-8].min()
    if gap > 0.1:
        assert abs(h[-1] - len(g.connected_components())) <= 1e-3


def test_netlsd_small_time_bound(karate, lesmis):
    # 1 - exp(-x) <= x gives V - h(t) <= t * trace = t * 2E on any graph
    for g in (karate, lesmis):
        h = heat_trace(laplacian_spectrum(g), np.array([1e-2]))[0]
        assert 0 <= g.n_nodes - h <= 1e-2 * 2 * g.n_edges


def test_dump_formats(tmp_path):
    write_spectrum(path(3), tmp_path / "s.txt")
    vals = [float(x) for x in (tmp_path / "s.txt").read_text().split()]
    assert vals == pytest.approx([0, 1, 3])
    write_signature_csv(path(3), tmp_path / "h.csv")
    lines = (tmp_path / "h.csv").read_text().splitlines()
    assert lines[0] == "t,h" and len(lines) == 251

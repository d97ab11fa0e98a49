import numpy as np
import pytest

from angsync.core import InvalidInputError, OffsetGraph, TooLargeError, reduce_angles
from angsync.eig import build_sync_matrix, top_eigpair
from angsync.generators import CompleteModelParams, gen_complete
from angsync.spectra import cluster_sizes, full_spectrum, histogram, top_k_spectrum
from angsync.theory import wigner_edge


def all_good_triangle(theta):
    th = np.asarray(theta, dtype=float)
    delta = reduce_angles([th[0] - th[1], th[0] - th[2], th[1] - th[2]])
    return OffsetGraph(n=3, i=[0, 0, 1], j=[1, 2, 2], delta=delta)


class TestFullSpectrum:
    def test_triangle_spectrum(self):
        H = build_sync_matrix(all_good_triangle([0.3, 1.8, 5.2]))
        w = full_spectrum(H)
        assert np.allclose(w, [2.0, -1.0, -1.0], atol=1e-10)

    def test_single_edge(self):
        g = OffsetGraph(n=2, i=[0], j=[1], delta=[1.3])
        assert np.allclose(full_spectrum(build_sync_matrix(g)), [1.0, -1.0])

    def test_descending_order(self):
        graph, _ = gen_complete(CompleteModelParams(n=30, p=0.5, seed=1))
        w = full_spectrum(build_sync_matrix(graph))
        assert np.all(np.diff(w) <= 0)

    def test_trace_and_frobenius_identities(self):
        graph, _ = gen_complete(CompleteModelParams(n=50, p=0.4, seed=3))
        shift = 0.3
        H = build_sync_matrix(graph, shift)
        w = full_spectrum(H)
        assert abs(w.sum() - 50 * shift) <= 1e-8 * 50
        assert abs((w**2).sum() - (2 * graph.m + 50 * shift**2)) <= 1e-8 * graph.m

    def test_matches_power_iteration(self):
        for seed in (1, 2):
            graph, _ = gen_complete(CompleteModelParams(n=60, p=0.6, seed=seed))
            H = build_sync_matrix(graph)
            w = full_spectrum(H)
            pi = top_eigpair(H, tol=1e-11, seed=0)
            assert pi.eigval == pytest.approx(w[0], rel=1e-8)

    def test_below_threshold_stays_at_bulk_edge(self):
        # p at the recovery threshold: no separated outlier eigenvalue
        n, p = 400, 0.05
        edge = wigner_edge(n, p)
        hits = 0
        for seed in range(10):
            graph, _ = gen_complete(CompleteModelParams(n=n, p=p, seed=700 + seed))
            w = full_spectrum(build_sync_matrix(graph, diagonal_shift=p))
            hits += w[0] < 1.05 * edge
        assert hits >= 8

    def test_too_large_rejected(self):
        graph, _ = gen_complete(CompleteModelParams(n=30, p=1.0, seed=0))
        with pytest.raises(TooLargeError):
            full_spectrum(build_sync_matrix(graph), dense_limit=10)


class TestTopK:
    def test_k_one_matches_power_iteration(self):
        graph, _ = gen_complete(CompleteModelParams(n=40, p=0.7, seed=5))
        H = build_sync_matrix(graph)
        top = top_k_spectrum(H, 1)
        pi = top_eigpair(H, tol=1e-11, seed=1)
        assert top[0] == pytest.approx(pi.eigval, rel=1e-6)

    def test_all_bad_within_semicircle_band(self):
        graph, _ = gen_complete(CompleteModelParams(n=400, p=0.0, seed=9))
        top = top_k_spectrum(build_sync_matrix(graph), 5)
        assert np.all(top <= 1.1 * wigner_edge(400, 0.0))

    def test_k_validation(self):
        graph, _ = gen_complete(CompleteModelParams(n=10, p=1.0, seed=0))
        H = build_sync_matrix(graph)
        with pytest.raises(InvalidInputError):
            top_k_spectrum(H, 0)
        with pytest.raises(InvalidInputError):
            top_k_spectrum(H, 11)


class TestHistogram:
    def test_all_in_one_bin(self):
        out = histogram([1.0, 1.1, 0.9], 1)
        assert len(out) == 1
        assert out[0][1] == 3

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            histogram([], 4)

    def test_uniform_grid_balanced(self):
        vals = np.linspace(0.0, 1.0, 100, endpoint=False)
        out = histogram(vals, 10)
        assert [count for _, count in out] == [10] * 10

    def test_counts_sum(self):
        rng = np.random.default_rng(0)
        vals = rng.normal(size=257)
        out = histogram(vals, 13)
        assert sum(count for _, count in out) == 257


class TestClusterSizes:
    def test_synthetic_split(self):
        vals = [10.0, 9.5, 9.4, 5.0, 4.9]
        assert cluster_sizes(vals, rel_gap=0.10) == [3, 2]

    def test_single_cluster_when_gaps_small(self):
        vals = [10.0, 9.8, 9.6, 9.4]
        assert cluster_sizes(vals, rel_gap=0.10) == [4]

    def test_empty(self):
        assert cluster_sizes([]) == []

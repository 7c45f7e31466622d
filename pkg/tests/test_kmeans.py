import itertools

import numpy as np
import pytest

from kpod import (
    Assignment,
    Centroids,
    DuplicateCentersWarning,
    InfeasibleError,
    ShapeMismatchError,
    assign_step,
    kmeans_objective,
    kmeanspp_init,
    lloyd,
    update_step,
)


class TestObjective:
    def test_rows_on_centroids_give_zero(self):
        centers = np.array([[0.0, 0.0], [5.0, 5.0]])
        labels = np.array([0, 1, 1, 0])
        assert kmeans_objective(centers[labels], Assignment(labels=labels),
                                Centroids(centers=centers)) == 0.0

    def test_hand_case(self):
        data = np.array([[0.0], [2.0]])
        result = kmeans_objective(data, Assignment(labels=[0, 0]),
                                  Centroids(centers=[[1.0]]))
        assert result == 2.0

    def test_random_matches_double_loop(self):
        rng = np.random.default_rng(11)
        data = rng.normal(0, 2, (9, 3))
        labels = rng.integers(0, 3, 9)
        centers = rng.normal(0, 2, (3, 3))
        oracle = sum(
            float(np.sum((data[i] - centers[labels[i]]) ** 2)) for i in range(9)
        )
        got = kmeans_objective(data, Assignment(labels=labels), Centroids(centers=centers))
        assert got == pytest.approx(oracle, rel=1e-12)

    def test_out_of_range_label(self):
        with pytest.raises(IndexError):
            kmeans_objective(np.ones((2, 1)), Assignment(labels=[0, 5]),
                             Centroids(centers=[[1.0]]))


class TestSeeding:
    def test_k_equals_n_is_a_permutation_of_rows(self):
        rng = np.random.default_rng(0)
        data = rng.normal(0, 1, (6, 2))
        centers = kmeanspp_init(data, 6, seed=1).centers
        matched = {int(np.argmin(np.sum((data - c) ** 2, axis=1))) for c in centers}
        assert matched == set(range(6))

    def test_k_one_returns_a_data_row(self):
        data = np.arange(10.0).reshape(5, 2)
        center = kmeanspp_init(data, 1, seed=3).centers[0]
        assert any(np.array_equal(center, row) for row in data)

    def test_k_greater_than_n(self):
        with pytest.raises(InfeasibleError):
            kmeanspp_init(np.ones((2, 1)), 3, seed=0)

    def test_duplicate_rows_warn(self):
        data = np.ones((4, 2))
        with pytest.warns(DuplicateCentersWarning):
            centers = kmeanspp_init(data, 2, seed=0).centers
        assert np.array_equal(centers[0], centers[1])

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(8)
        data = rng.normal(0, 1, (20, 3))
        a = kmeanspp_init(data, 4, seed=123).centers
        b = kmeanspp_init(data, 4, seed=123).centers
        assert np.array_equal(a, b)

    def test_distance_squared_sampling_frequency(self):
        # Two tight pairs, far apart. Given the first pick, the second center
        # lands in the opposite pair with probability (sum of opposite-pair
        # squared distances) / (total squared distances); that analytic value
        # is both the Monte Carlo target and above the far^2/(far^2+near^2)
        # lower bound.
        far, near = 5.0, 1.0
        data = np.array([[0.0, 0.0], [0.0, near], [far, 0.0], [far, near]])
        pair = np.array([0, 0, 1, 1])

        def analytic():
            total = 0.0
            for first in range(4):
                d2 = np.sum((data - data[first]) ** 2, axis=1)
                total += 0.25 * d2[pair != pair[first]].sum() / d2.sum()
            return total

        trials = 1500
        hits = 0
        for seed in range(trials):
            centers = kmeanspp_init(data, 2, seed=seed).centers
            first, second = (
                int(np.argmin(np.sum((data - c) ** 2, axis=1))) for c in centers
            )
            hits += pair[first] != pair[second]
        freq = hits / trials
        expected = analytic()
        sigma = np.sqrt(expected * (1 - expected) / trials)
        assert abs(freq - expected) < 4 * sigma
        assert freq >= far**2 / (far**2 + near**2) - 4 * sigma


class TestAssign:
    def test_rows_equal_centroids(self):
        centers = np.array([[0.0, 0.0], [4.0, 4.0], [9.0, 0.0]])
        got = assign_step(centers[[2, 0, 1]], Centroids(centers=centers))
        assert got.labels.tolist() == [2, 0, 1]

    def test_tie_goes_to_lowest_index(self):
        b = Centroids(centers=[[0.0], [1.0]])
        assert assign_step(np.array([[0.5]]), b).labels.tolist() == [0]

    def test_random_matches_argmin_oracle(self):
        rng = np.random.default_rng(21)
        data = rng.normal(0, 1, (15, 4))
        centers = rng.normal(0, 1, (5, 4))
        got = assign_step(data, Centroids(centers=centers))
        for i in range(15):
            dists = [float(np.sum((data[i] - c) ** 2)) for c in centers]
            assert got.labels[i] == int(np.argmin(dists))

    def test_shape_check(self):
        with pytest.raises(ShapeMismatchError):
            assign_step(np.ones((2, 3)), Centroids(centers=np.ones((2, 2))))


class TestUpdate:
    def test_singletons(self):
        data = np.array([[1.0, 2.0], [5.0, 6.0]])
        got = update_step(data, Assignment(labels=[0, 1]), 2)
        assert np.array_equal(got.centers, data)

    def test_pair_mean(self):
        data = np.array([[0.0, 0.0], [2.0, 2.0]])
        got = update_step(data, Assignment(labels=[0, 0]), 1)
        assert np.array_equal(got.centers, [[1.0, 1.0]])

    def test_random_matches_groupby_mean(self):
        rng = np.random.default_rng(31)
        data = rng.normal(0, 1, (12, 3))
        labels = rng.integers(0, 3, 12)
        labels[:3] = [0, 1, 2]  # no empty clusters
        got = update_step(data, Assignment(labels=labels), 3)
        for c in range(3):
            assert np.allclose(got.centers[c], data[labels == c].mean(axis=0), rtol=1e-12)

    def test_empty_cluster_reseeded_from_farthest_point(self):
        data = np.array([[0.0], [0.1], [10.0]])
        got = update_step(data, Assignment(labels=[0, 0, 0]), 2)
        # cluster 0 center is the grand mean; cluster 1 takes the farthest row
        grand = data.mean(axis=0)
        assert np.allclose(got.centers[0], grand)
        assert np.array_equal(got.centers[1], data[2])

    def test_two_empty_clusters_take_distinct_rows(self):
        data = np.array([[0.0], [8.0], [10.0]])  # grand mean 6: farthest rows are 0 then 10
        got = update_step(data, Assignment(labels=[0, 0, 0]), 3)
        assert got.centers[1][0] == 0.0
        assert got.centers[2][0] == 10.0


class TestLloyd:
    def test_separated_blobs_recovered(self):
        rng = np.random.default_rng(41)
        centers = np.array([[0.0, 0.0], [30.0, 0.0], [0.0, 30.0]])
        labels = np.repeat(np.arange(3), 25)
        data = centers[labels] + rng.normal(0, 1, (75, 2))
        result = lloyd(data, 3, seed=5)
        # same partition up to relabeling
        mapping = {}
        for mine, true in zip(result.assignment.labels, labels):
            mapping.setdefault(int(mine), int(true))
            assert mapping[int(mine)] == true

    def test_repeated_rows_reach_zero(self):
        data = np.repeat(np.array([[0.0, 0.0], [5.0, 5.0], [9.0, 1.0]]), 4, axis=0)
        result = lloyd(data, 3, seed=0)
        assert result.objective == 0.0
        assert result.converged

    def test_objective_monotone_across_manual_sweeps(self):
        rng = np.random.default_rng(51)
        data = rng.normal(0, 1, (40, 3))
        centers = kmeanspp_init(data, 4, seed=9)
        prev = np.inf
        for _ in range(12):
            assignment = assign_step(data, centers)
            mid = kmeans_objective(data, assignment, centers)
            assert mid <= prev + 1e-9
            centers = update_step(data, assignment, 4)
            prev = kmeans_objective(data, assignment, centers)
            assert prev <= mid + 1e-9

    def test_fixed_point_after_convergence(self):
        rng = np.random.default_rng(61)
        data = rng.normal(0, 1, (30, 2))
        result = lloyd(data, 3, seed=2, max_iter=200)
        assert result.converged
        again = assign_step(data, result.centroids)
        assert np.array_equal(again.labels, result.assignment.labels)
        centers = update_step(data, again, 3)
        assert np.allclose(centers.centers, result.centroids.centers, atol=1e-9)

    def test_objective_equals_recomputed_loss(self):
        rng = np.random.default_rng(71)
        data = rng.normal(0, 1, (25, 2))
        result = lloyd(data, 4, seed=3)
        assert result.objective == pytest.approx(
            kmeans_objective(data, result.assignment, result.centroids), rel=1e-12
        )

    def test_infeasible_k(self):
        with pytest.raises(InfeasibleError):
            lloyd(np.ones((3, 1)), 4, seed=0)
        with pytest.raises(InfeasibleError):
            lloyd(np.ones((3, 1)), 0, seed=0)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(81)
        data = rng.normal(0, 1, (30, 3))
        a = lloyd(data, 3, seed=17)
        b = lloyd(data, 3, seed=17)
        assert np.array_equal(a.assignment.labels, b.assignment.labels)
        assert np.array_equal(a.centroids.centers, b.centroids.centers)

    def test_n_init_never_hurts(self):
        rng = np.random.default_rng(91)
        data = rng.normal(0, 1, (40, 2))
        single = lloyd(data, 5, seed=7, n_init=1)
        multi = lloyd(data, 5, seed=7, n_init=8)
        assert multi.objective <= single.objective + 1e-9

    def test_permutation_equivariance_with_explicit_init(self):
        rng = np.random.default_rng(101)
        data = rng.normal(0, 1, (24, 3))
        init = Centroids(centers=rng.normal(0, 1, (3, 3)))
        perm = rng.permutation(24)
        base = lloyd(data, 3, init=init)
        permuted = lloyd(data[perm], 3, init=init)
        assert np.array_equal(permuted.assignment.labels, base.assignment.labels[perm])
        assert np.allclose(permuted.centroids.centers, base.centroids.centers, atol=1e-12)

    def test_multi_restart_attains_brute_force_optimum_on_tiny_instances(self):
        rng = np.random.default_rng(111)
        for _ in range(20):
            n = int(rng.integers(4, 9))
            k = int(rng.integers(2, 4))
            data = rng.normal(0, 1, (n, 2))

            def wcss(labeling):
                total = 0.0
                for c in range(k):
                    rows = data[np.asarray(labeling) == c]
                    if rows.size:
                        total += float(np.sum((rows - rows.mean(axis=0)) ** 2))
                return total

            best = min(wcss(labeling) for labeling in itertools.product(range(k), repeat=n))
            result = lloyd(data, k, seed=int(rng.integers(2**31)), n_init=20)
            assert result.objective >= best - 1e-9

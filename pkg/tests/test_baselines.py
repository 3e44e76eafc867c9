import itertools

import numpy as np
import pytest

from conftest import random_orthonormal_rows
from gsample import baselines
from gsample.design import DesignWeights


class TestGreedySigmaMin:
    def test_rank_forcing_pair(self):
        rows = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        seq = baselines.greedy_sigma_min(rows, 2)
        assert set(seq.indices) == {0, 1}

    def test_full_budget_selects_all(self, rng):
        rows = random_orthonormal_rows(5, 2, rng)
        seq = baselines.greedy_sigma_min(rows, 5)
        assert np.array_equal(seq.indices, np.arange(5))

    def test_matches_per_step_enumeration(self, rng):
        rows = random_orthonormal_rows(6, 2, rng)
        chosen = []
        remaining = list(range(6))
        for _ in range(3):
            cols = min(len(chosen) + 1, 2)
            scores = [
                (np.linalg.svd(rows[chosen + [i], :cols], compute_uv=False)[-1], i)
                for i in remaining
            ]
            best = max(scores, key=lambda t: (t[0], -t[1]))[1]
            chosen.append(best)
            remaining.remove(best)
        seq = baselines.greedy_sigma_min(rows, 3)
        assert set(seq.indices) == set(chosen)

    def test_never_strands_rank(self, rng):
        # whenever some size-M subset is full rank, greedy finds one
        for trial in range(10):
            rows = rng.standard_normal((7, 3))
            m = 4
            any_full = any(
                np.linalg.matrix_rank(rows[list(c)]) == 3
                for c in itertools.combinations(range(7), m)
            )
            if not any_full:
                continue
            seq = baselines.greedy_sigma_min(rows, m)
            assert np.linalg.matrix_rank(rows[seq.indices]) == 3

    def test_budget_exceeds_nodes(self, rng):
        with pytest.raises(ValueError):
            baselines.greedy_sigma_min(random_orthonormal_rows(4, 2, rng), 5)

    def test_distinct_sorted_output(self, rng):
        rows = random_orthonormal_rows(10, 3, rng)
        seq = baselines.greedy_sigma_min(rows, 6)
        assert len(set(seq.indices)) == 6
        assert np.array_equal(seq.indices, np.sort(seq.indices))


class TestTopMSelection:
    def test_simple_sort(self):
        w = DesignWeights(np.array([0.5, 0.3, 0.2]))
        seq = baselines.top_m_selection(w, 2)
        assert np.array_equal(seq.indices, [0, 1])

    def test_uniform_ties_go_low(self):
        w = DesignWeights(np.full(6, 1 / 6))
        seq = baselines.top_m_selection(w, 3)
        assert np.array_equal(seq.indices, [0, 1, 2])

    def test_matches_sort_oracle(self, rng):
        p = rng.dirichlet(np.ones(12))
        seq = baselines.top_m_selection(DesignWeights(p), 5)
        expected = np.sort(np.argsort(-p)[:5])
        assert np.array_equal(seq.indices, expected)

    def test_budget_exceeds_nodes(self):
        with pytest.raises(ValueError):
            baselines.top_m_selection(DesignWeights(np.array([0.5, 0.5])), 3)

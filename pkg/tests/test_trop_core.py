import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from troplin import (
    CycleError,
    ShapeError,
    SizeCapError,
    TropMatrix,
    format_value,
    is_trop_singular,
    kleene_star,
    parse_value,
    submatrix,
    trop_det,
    trop_matmul,
    trop_pow,
    trop_rank,
)
from conftest import exact_matrix_strategy, max_path_weight_oracle, random_dag, random_weights

# the 3x3 matrix from the worked rank-2 example and its leading 2x2 minor
M3 = TropMatrix([[6, 3, 0], [0, 8, 4], [6, 4, 2]])
M2 = TropMatrix([[6, 3], [0, 8]])


class TestMatmul:
    def test_identity_is_neutral(self):
        a = TropMatrix([[5, 0, 2], [1, 7, 3]])
        assert trop_matmul(a, TropMatrix.identity(3)) == a
        assert trop_matmul(TropMatrix.identity(2), a) == a

    def test_hand_evaluated_square(self):
        a = TropMatrix([[0, 3], [2, 0]])
        assert trop_matmul(a, a) == TropMatrix([[6, 0], [0, 6]])

    def test_rank_one_factors_join_to_worked_matrix(self):
        f1 = trop_matmul(TropMatrix([[0], [2], [1]]), TropMatrix([[0, 4, 2]]))
        f2 = trop_matmul(TropMatrix([[3], [0], [3]]), TropMatrix([[2, 1, 0]]))
        assert f1.join(f2) == M3

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            trop_matmul(TropMatrix([[1, 2]]), TropMatrix([[1, 2]]))

    def test_mode_mixing_rejected(self):
        with pytest.raises(ValueError):
            trop_matmul(TropMatrix([[1]]), TropMatrix([[1.0]], exact=False))


class TestPow:
    def test_zeroth_power_is_identity(self):
        a = TropMatrix([[2, 1], [0, 5]])
        assert trop_pow(a, 0) == TropMatrix.identity(2)

    def test_first_power_is_input(self):
        a = TropMatrix([[2, 1], [0, 5]])
        assert trop_pow(a, 1) == a

    def test_nilpotent_chain_square(self):
        # chain 1 -> 2 -> 3 with unit weights: entry (j -> i) lives at (i, j)
        c = TropMatrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
        sq = trop_pow(c, 2)
        assert sq == TropMatrix([[0, 0, 0], [0, 0, 0], [1, 0, 0]])
        assert trop_pow(c, 3) == TropMatrix.zeros(3, 3)

    def test_non_square_rejected(self):
        with pytest.raises(ShapeError):
            trop_pow(TropMatrix([[1, 2]]), 2)


class TestKleeneStar:
    def test_zero_matrix_gives_identity(self):
        assert kleene_star(TropMatrix.zeros(4, 4)) == TropMatrix.identity(4)

    def test_two_chain(self):
        w = Fraction(7, 2)
        c = TropMatrix([[0, 0], [w, 0]])
        assert kleene_star(c) == TropMatrix([[1, 0], [w, 1]])

    def test_diamond_best_of_two_routes(self):
        # edges 1->2 (2), 1->3 (3), 2->4 (5), 3->4 (7): two routes into node 4
        c = TropMatrix(
            [[0, 0, 0, 0], [2, 0, 0, 0], [3, 0, 0, 0], [0, 5, 7, 0]]
        )
        star = kleene_star(c)
        assert star[3, 0] == max(2 * 5, 3 * 7)
        assert all(star[i, i] == 1 for i in range(4))

    def test_cyclic_support_rejected(self):
        with pytest.raises(CycleError):
            kleene_star(TropMatrix([[0, 1], [1, 0]]))
        with pytest.raises(CycleError):
            kleene_star(TropMatrix([[1]]))

    def test_agrees_with_power_join_and_path_oracle(self):
        rng = random.Random(404)
        for _ in range(25):
            n = rng.randint(1, 6)
            g = random_dag(rng, n)
            w = random_weights(rng, g)
            grid = [[Fraction(0)] * n for _ in range(n)]
            for (u, v), wt in w.items():
                grid[v - 1][u - 1] = wt
            c = TropMatrix(grid)
            star = kleene_star(c)
            joined = TropMatrix.identity(n)
            for k in range(1, n):
                joined = joined.join(trop_pow(c, k))
            assert star == joined
            oracle = max_path_weight_oracle(grid)
            assert star.to_lists() == oracle


class TestDet:
    def test_worked_two_by_two(self):
        res = trop_det(M2)
        assert res.value == 48
        assert res.attain_count == 1
        assert res.witnesses == ((0, 1),)

    def test_worked_three_by_three_tie(self):
        res = trop_det(M3)
        assert res.value == 96
        assert res.attain_count == 2
        # 6*8*2 and 6*4*4
        assert res.witnesses == ((0, 1, 2), (0, 2, 1))

    def test_identity(self):
        res = trop_det(TropMatrix.identity(4))
        assert res.value == 1 and res.attain_count == 1

    def test_zero_value_counts_every_permutation(self):
        res = trop_det(TropMatrix.zeros(3, 3))
        assert res.value == 0 and res.attain_count == math.factorial(3)

    def test_cap_enforced(self):
        with pytest.raises(SizeCapError):
            trop_det(TropMatrix.identity(9))
        assert trop_det(TropMatrix.identity(9), size_cap=9).value == 1

    def test_approximate_tie_tolerance(self):
        a = TropMatrix([[1.0, 1.0], [1.0, 1.0 + 1e-12]], exact=False)
        assert trop_det(a).attain_count == 2
        b = TropMatrix([[1.0, 1.0], [1.0, 1.5]], exact=False)
        assert trop_det(b).attain_count == 1


class TestSingularAndRank:
    def test_worked_examples(self):
        assert not is_trop_singular(M2)
        assert is_trop_singular(M3)
        assert is_trop_singular(TropMatrix([[1, 1], [1, 1]]))
        assert trop_rank(M3) == 2
        assert trop_rank(TropMatrix.identity(5)) == 5
        assert trop_rank(TropMatrix.zeros(3, 4)) == 0

    def test_one_by_one(self):
        assert not is_trop_singular(TropMatrix([[3]]))
        assert is_trop_singular(TropMatrix([[0]]))
        assert trop_rank(TropMatrix([[0]])) == 0
        assert trop_rank(TropMatrix([[Fraction(1, 3)]])) == 1

    def test_rank_cap(self):
        with pytest.raises(SizeCapError):
            trop_rank(TropMatrix.zeros(9, 9))
        # non-square: cap applies to the smaller dimension
        assert trop_rank(TropMatrix.zeros(2, 12)) == 0

    @given(exact_matrix_strategy())
    @settings(max_examples=60, deadline=None)
    def test_singularity_matches_det_certificate(self, grid):
        a = TropMatrix(grid)
        if a.rows != a.cols:
            return
        res = trop_det(a)
        assert is_trop_singular(a) == (res.attain_count >= 2 or res.value == 0)
        if res.value > 0:
            for w in res.witnesses:
                prod = Fraction(1)
                for r, c in enumerate(w):
                    prod *= a[r, c]
                assert prod == res.value

    @given(exact_matrix_strategy(), st.randoms(use_true_random=False))
    @settings(max_examples=40, deadline=None)
    def test_rank_invariant_under_permutation_and_scaling(self, grid, rnd):
        a = TropMatrix(grid)
        base = trop_rank(a)
        rows = list(range(a.rows))
        cols = list(range(a.cols))
        rnd.shuffle(rows)
        rnd.shuffle(cols)
        shuffled = TropMatrix([[a[r, c] for c in cols] for r in rows])
        assert trop_rank(shuffled) == base
        lam = Fraction(rnd.randint(1, 9), rnd.randint(1, 9))
        k = rnd.randrange(a.rows)
        scaled = TropMatrix(
            [
                [x * lam if r == k else x for x in a.row(r)]
                for r in range(a.rows)
            ]
        )
        assert trop_rank(scaled) == base

    def test_rank_bounded_by_min_dimension(self):
        a = TropMatrix([[1, 2, 3], [4, 5, 6]])
        assert trop_rank(a) <= 2


class TestAlgebraProperties:
    @given(
        exact_matrix_strategy(max_dim=3),
        exact_matrix_strategy(max_dim=3),
        exact_matrix_strategy(max_dim=3),
    )
    @settings(max_examples=60, deadline=None)
    def test_associativity(self, ga, gb, gc):
        a, b, c = TropMatrix(ga), TropMatrix(gb), TropMatrix(gc)
        if a.cols != b.rows or b.cols != c.rows:
            return
        assert trop_matmul(trop_matmul(a, b), c) == trop_matmul(a, trop_matmul(b, c))

    @given(exact_matrix_strategy())
    @settings(max_examples=40, deadline=None)
    def test_identity_neutral(self, grid):
        a = TropMatrix(grid)
        assert trop_matmul(a, TropMatrix.identity(a.cols)) == a
        assert trop_matmul(TropMatrix.identity(a.rows), a) == a


class TestSubmatrix:
    def test_worked_minor(self):
        assert M3.submatrix([1, 2], [1, 2]) == M2
        assert submatrix(M3, [1, 2], [1, 2]) == M2

    def test_full_selection_is_input(self):
        assert M3.submatrix([1, 2, 3], [1, 2, 3]) == M3

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            M3.submatrix([1, 4], [1])
        with pytest.raises(ValueError):
            M3.submatrix([1], [0])


class TestConstructionAndSerialization:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            TropMatrix([[-1]])
        with pytest.raises(ValueError):
            TropMatrix([[-0.5]], exact=False)

    def test_float_in_exact_mode_rejected(self):
        with pytest.raises(TypeError):
            TropMatrix([[0.5]], exact=True)

    def test_ragged_rejected(self):
        with pytest.raises(ShapeError):
            TropMatrix([[1, 2], [3]])

    def test_mode_inference(self):
        assert TropMatrix([[1, 2]]).exact
        assert not TropMatrix([[1.0, 2.0]]).exact

    def test_json_round_trip_exact(self):
        a = TropMatrix([[Fraction(1, 3), 0], [2, Fraction(7, 2)]])
        doc = a.to_json_dict()
        assert doc["entries"][0][0] == "1/3"
        assert TropMatrix.from_json_dict(json.loads(json.dumps(doc))) == a

    def test_json_round_trip_float(self):
        a = TropMatrix([[0.25, 1.7]], exact=False)
        doc = a.to_json_dict()
        b = TropMatrix.from_json_dict(json.loads(json.dumps(doc)), exact=False)
        assert b == a

    def test_value_formats(self):
        assert format_value(Fraction(3)) == "3"
        assert format_value(Fraction(1, 3)) == "1/3"
        assert parse_value("2.5") == Fraction(5, 2)
        assert parse_value("1/4") == Fraction(1, 4)
        assert parse_value("2.5", exact=False) == 2.5

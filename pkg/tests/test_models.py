import itertools

import pytest

from symbreak.engine import HeuristicSpec, solve_all, solve_optimize
from symbreak.models import attacking_pairs, build_labs, build_queens_armies, build_still_life
from symbreak.oracle import direct_check, labs_correlations, labs_energy, queens_check
from symbreak.symmetry import apply, labs_symmetries, linearize, queens_symmetries

# frozen by exhaustive enumeration (see tests/test_oracle.py for the recomputation)
LABS_OPTIMA = {3: 1, 4: 2, 5: 2, 6: 7, 7: 3, 8: 8, 9: 12, 10: 13}
STILL_LIFE_OPTIMA = {1: 0, 2: 4, 3: 6, 4: 8}
QUEENS_OPTIMA = {1: 0, 2: 0, 3: 1, 4: 2}


def decision_solutions(model):
    sols, _ = solve_all(model)
    return {tuple(s[x] for x in model.decision) for s in sols}


class TestStillLife:
    def test_three_by_three_optimum(self):
        assert solve_optimize(build_still_life(3)).optimum == 6

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_optimum(self, n):
        assert solve_optimize(build_still_life(n)).optimum == STILL_LIFE_OPTIMA[n]

    def test_border_fixed_dead(self):
        m = build_still_life(3)
        inner = set(m.decision)
        obj = m.objective[0]
        border = [x for x in range(m.num_vars) if x not in inner and x != obj]
        assert len(border) == 5 * 5 - 9
        assert all(m.domains[x] == 1 for x in border)

    def test_empty_board_feasible(self):
        m = build_still_life(4)
        sols = decision_solutions(m)
        assert (0,) * 16 in sols

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_solution_set_equals_checker(self, n):
        want = {a for a in itertools.product((0, 1), repeat=n * n)
                if direct_check("still-life", a)[0]}
        assert decision_solutions(build_still_life(n)) == want

    def test_rejects_bad_size(self):
        with pytest.raises(ValueError):
            build_still_life(0)


class TestLabs:
    @pytest.mark.parametrize("n", range(3, 11))
    def test_optimum(self, n):
        assert solve_optimize(build_labs(n)).optimum == LABS_OPTIMA[n]

    def test_constant_sequence_energy(self):
        m = build_labs(4)
        sols, _ = solve_all(m)
        const = [s for s in sols if [s[x] for x in m.decision] == [0, 0, 0, 0]]
        assert len(const) == 1 and const[0][m.objective[0]] == 14
        assert labs_energy((0, 0, 0, 0)) == 14

    @pytest.mark.parametrize("n", [3, 5, 6])
    def test_correlations_match_formula(self, n):
        m = build_labs(n)
        sols, _ = solve_all(m)
        assert len(sols) == 2**n
        dvars = [m.names.index(f"d{k}") for k in range(1, n)]
        for s in sols:
            seq = [s[x] for x in m.decision]
            from_model = [(n - k) - 2 * s[dvars[k - 1]] for k in range(1, n)]
            assert from_model == labs_correlations(seq)
            assert s[m.objective[0]] == labs_energy(seq)

    def test_symmetric_images_of_optimum(self):
        res = solve_optimize(build_labs(6))
        seq = res.witness[:6]
        for s in labs_symmetries(6):
            assert labs_energy(apply(s, seq)) == res.optimum

    def test_rejects_bad_size(self):
        with pytest.raises(ValueError):
            build_labs(1)


class TestQueens:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_optimum(self, n):
        assert solve_optimize(build_queens_armies(n)).optimum == QUEENS_OPTIMA[n]

    def test_solution_set_equals_checker(self):
        want = {a for a in itertools.product(range(3), repeat=9) if direct_check("queens-armies", a)[0]}
        assert decision_solutions(build_queens_armies(3)) == want

    def test_colour_swap_keeps_optimal(self):
        m = build_queens_armies(4)
        res = solve_optimize(m)
        board = [res.witness[x] for x in m.decision]
        for s in queens_symmetries(4):
            ok, val = direct_check("queens-armies", apply(s, board))
            assert ok and val == res.optimum

    def test_attacking_pairs(self):
        assert len(attacking_pairs(1)) == 0
        assert len(attacking_pairs(2)) == 6
        # rows + cols + diagonals on 3x3: 9 + 9 + 10
        assert len(attacking_pairs(3)) == 28

    def test_same_line_infeasible(self):
        assert not queens_check([[1, 0, 2], [0, 0, 0], [0, 0, 0]])[0]


@pytest.mark.parametrize("heur", ["static", "ff", "degree", "constr"])
@pytest.mark.parametrize("order", ["ascending", "descending"])
def test_heuristics_agree_on_optimum(heur, order):
    m = build_still_life(4)
    spec = HeuristicSpec(heur, linearize((4, 4), "spiral-in").order if heur in ("static", "ff") else None)
    assert solve_optimize(m, spec, order).optimum == 8

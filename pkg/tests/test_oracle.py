import itertools

import pytest

from symbreak.engine import GuardExceeded
from symbreak.models import build_free_matrix, build_labs
from symbreak.oracle import (
    brute_force,
    canonical_in_orbit,
    dc_closure,
    direct_check,
    gray_leq,
    gray_listing,
    lex_leq,
    orbit,
    orbits,
    queens_optimum,
    still_life_check,
    verify_sound_complete,
)
from symbreak.ordering import OrderingKind
from symbreak.symmetry import (
    Symmetry,
    SymmetryGroup,
    apply,
    labs_symmetries,
    linearize,
    post_leader_constraints,
    rowcol_symmetries,
)

from test_models import LABS_OPTIMA, QUEENS_OPTIMA, STILL_LIFE_OPTIMA


def test_gray_listing_two_bits():
    assert gray_listing(2) == ((0, 0), (0, 1), (1, 1), (1, 0))


def test_gray_listing_guard():
    with pytest.raises(GuardExceeded):
        gray_listing(23)


class TestBruteForce:
    @pytest.mark.parametrize("n", range(3, 11))
    def test_labs(self, n):
        assert brute_force("labs", n)[0] == LABS_OPTIMA[n]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_still_life(self, n):
        assert brute_force("still-life", n)[0] == STILL_LIFE_OPTIMA[n]

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_queens_full_enumeration(self, n):
        assert brute_force("queens-armies", n)[0] == QUEENS_OPTIMA[n]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_queens_by_white_sets(self, n):
        assert queens_optimum(n) == QUEENS_OPTIMA[n]

    def test_guards(self):
        with pytest.raises(GuardExceeded):
            brute_force("queens-armies", 4)
        with pytest.raises(GuardExceeded):
            queens_optimum(5)
        with pytest.raises(ValueError):
            brute_force("sudoku", 3)


class TestCheckers:
    def test_known_optimal_pattern(self, known_still_life_3):
        assert still_life_check(known_still_life_3) == (True, 6)
        assert direct_check("still-life", sum(known_still_life_3, [])) == (True, 6)

    def test_unstable_patterns(self):
        assert not still_life_check([[1, 0], [0, 0]])[0]
        # blinker oscillates
        assert not still_life_check([[0, 1, 0], [0, 1, 0], [0, 1, 0]])[0]
        # three live cells on the edge would give birth outside the board
        assert not still_life_check([[1, 1, 1], [0, 0, 0], [0, 0, 0]])[0]

    def test_block(self):
        assert still_life_check([[1, 1], [1, 1]]) == (True, 4)

    def test_labs_constant(self):
        assert direct_check("labs", (1, 1, 1, 1)) == (True, 14)

    def test_queens(self):
        assert direct_check("queens-armies", (1, 0, 2, 0)) == (False, 0)
        assert direct_check("queens-armies", (1, 0, 0, 0, 0, 0, 0, 2, 0)) == (True, 1)
        assert direct_check("queens-armies", (1, 0, 0, 0)) == (False, 0)


class TestDcClosure:
    def test_failure(self):
        assert dc_closure(lambda a: lex_leq(a[:2], a[2:]), [{1}, {0, 1}, {0}, {0, 1}]) is None

    def test_gray_example(self):
        got = dc_closure(lambda a: gray_leq(a[:2], a[2:]), [{1}, {1}, {0, 1}, {0, 1}])
        assert got == [{1}, {1}, {1}, {0, 1}]

    def test_idempotent_and_monotone(self):
        check = lambda a: gray_leq(a[:3], a[3:])
        for doms in itertools.product(({0}, {1}, {0, 1}), repeat=6):
            once = dc_closure(check, doms)
            if once is None:
                continue
            assert dc_closure(check, once) == once
            smaller = [{min(d)} if i == 0 else d for i, d in enumerate(doms)]
            sm = dc_closure(check, smaller)
            assert sm is None or all(s <= o for s, o in zip(sm, once))

    def test_guard(self):
        with pytest.raises(GuardExceeded):
            dc_closure(lambda a: True, [range(3)] * 14)


class TestCanonical:
    def test_identity_group(self):
        g = SymmetryGroup([Symmetry.identity(4)])
        a = (1, 0, 1, 1)
        for k in OrderingKind:
            assert canonical_in_orbit(a, g, k, linearize((2, 2), "row")) == a

    def test_antidiagonal(self):
        g = rowcol_symmetries(2, 2)
        lin = linearize((2, 2), "row")
        assert canonical_in_orbit((0, 1, 1, 0), g, OrderingKind.LEX, lin) == (0, 1, 1, 0)
        assert canonical_in_orbit((0, 1, 1, 0), g, OrderingKind.ANTI_LEX, lin) == (1, 0, 0, 1)

    def test_invariant_under_group_action(self):
        g = rowcol_symmetries(2, 3)
        lin = linearize((2, 3), "snake")
        for a in itertools.product((0, 1), repeat=6):
            for k in OrderingKind:
                c = canonical_in_orbit(a, g, k, lin)
                assert all(canonical_in_orbit(apply(s, a), g, k, lin) == c for s in g)

    def test_group_guard(self):
        big = SymmetryGroup([Symmetry.identity(2)] * 10_001)
        with pytest.raises(GuardExceeded):
            orbit((0, 1), big)


class TestVerify:
    def test_empty_breaking_keeps_orbits(self):
        rep = verify_sound_complete(build_free_matrix(2, 3), rowcol_symmetries(2, 3), lambda m: m)
        assert rep.survivors_per_orbit == rep.orbit_sizes
        assert sum(rep.orbit_sizes) == 64
        assert rep.sound and not rep.complete and rep.passed

    def test_orbit_sizes_sum_to_solutions(self):
        g = labs_symmetries(7)
        parts = orbits(itertools.product((0, 1), repeat=7), g)
        assert sum(map(len, parts)) == 128

    def test_strict_leader_is_unsound(self):
        g = rowcol_symmetries(3, 3)
        lin = linearize((3, 3), "row")
        rep = verify_sound_complete(
            build_free_matrix(3, 3), g,
            lambda m: post_leader_constraints(m, g, OrderingKind.GRAY, lin, strict=True),
            (OrderingKind.GRAY, lin))
        assert not rep.sound and not rep.passed
        assert rep.first_counterexample() == [0] * 9

    def test_assignment_guard(self):
        with pytest.raises(GuardExceeded):
            verify_sound_complete(build_labs(23), labs_symmetries(23), lambda m: m)

    def test_report_dict(self):
        g = rowcol_symmetries(2, 2)
        rep = verify_sound_complete(build_free_matrix(2, 2), g, lambda m: m)
        d = rep.as_dict()
        assert d["orbit_count"] == 7 and d["solutions"] == 16 and d["survivors"] == 16
        assert d["first_counterexample"] is None

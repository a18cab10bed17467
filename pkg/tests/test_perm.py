import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_orbit_count, sympy_elements, sympy_order
from symbreak.errors import CapExceeded, NotSubgroup, SpecError
from symbreak.groups import Johnson, Natural, RowColumn, realize
from symbreak.perm import (
    GeneratedGroup,
    Partition,
    Permutation,
    act_assignment,
    all_assignments,
    all_orbits,
    burnside_count,
    compose,
    enumerate_group,
    format_bits,
    inverse,
    orbit_of_assignment,
    parse_bits,
    partition_stabilizer,
    right_coset_reps,
    support,
)


def P(text, n):
    return Permutation.parse(text, n)


def G(n, *gens):
    return GeneratedGroup(n, tuple(P(s, n) for s in gens))


def bits(text):
    return parse_bits(text)


@st.composite
def perms(draw, n=None):
    n = n or draw(st.integers(1, 7))
    return Permutation(tuple(p + 1 for p in draw(st.permutations(range(n)))))


@st.composite
def perm_pair_and_word(draw):
    n = draw(st.integers(1, 7))
    g = draw(perms(n))
    h = draw(perms(n))
    theta = tuple(draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    return theta, g, h


class TestPermutation:
    def test_compose_identity(self):
        assert compose(Permutation.identity(3), P("(1 2 3)", 3)) == P("(1 2 3)", 3)

    def test_compose_involution(self):
        assert compose(P("(1 2)", 2), P("(1 2)", 2)).is_identity()

    def test_compose_left_to_right_golden(self):
        # 1 -> 2 -> 1, 2 -> 3 -> 3, 3 -> 1 -> 2
        assert str(compose(P("(1 2 3)", 3), P("(1 2)", 3))) == "(2 3)"

    def test_compose_degree_mismatch(self):
        with pytest.raises(SpecError):
            compose(P("(1 2)", 2), P("(1 2)", 3))

    @pytest.mark.parametrize(
        "text,expected", [("()", "()"), ("(1 2)", "(1 2)"), ("(1 2 3)", "(1 3 2)")]
    )
    def test_inverse(self, text, expected):
        assert str(inverse(P(text, 3))) == expected

    def test_cycle_notation_round_trip(self):
        p = P("(1 2 3)(4 5)", 6)
        assert str(p) == "(1 2 3)(4 5)"
        assert p(6) == 6
        assert Permutation.parse(str(p), 6) == p

    @pytest.mark.parametrize("bad", [[1, 1, 2], [0, 1, 2], [2, 3, 4]])
    def test_rejects_non_bijection(self, bad):
        with pytest.raises(SpecError):
            Permutation(tuple(bad))

    @given(perms())
    def test_inverse_law(self, p):
        assert compose(p, inverse(p)).is_identity()
        assert compose(inverse(p), p).is_identity()


class TestAction:
    def test_identity(self):
        assert act_assignment(bits("110"), Permutation.identity(3)) == bits("110")

    def test_single_one_moves_to_image(self):
        assert format_bits(act_assignment(bits("100"), P("(1 2 3)", 3))) == "010"

    @settings(max_examples=1000)
    @given(perm_pair_and_word())
    def test_action_law(self, case):
        theta, g, h = case
        assert act_assignment(act_assignment(theta, g), h) == act_assignment(theta, compose(g, h))

    def test_length_mismatch(self):
        with pytest.raises(SpecError):
            act_assignment(bits("10"), P("(1 2 3)", 3))


class TestEnumeration:
    def test_transposition(self):
        elems = enumerate_group(G(2, "(1 2)"))
        assert [str(e) for e in elems] == ["()", "(1 2)"]

    def test_sym3(self):
        assert len(enumerate_group(G(3, "(1 2)", "(1 2 3)"))) == 6

    def test_johnson_4_2_order(self):
        g = realize(Johnson(4, 2))
        assert len(enumerate_group(g)) == 24 == sympy_order(g)

    def test_sorted_by_images(self):
        elems = enumerate_group(G(4, "(1 2)", "(1 2 3 4)"))
        assert [e.images for e in elems] == sorted(e.images for e in elems)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_group(G(5, "(1 2)", "(1 2 3 4 5)"), cap=100)

    def test_matches_sympy(self):
        g = G(6, "(1 2 3)(4 5)", "(2 6)")
        assert {e.images for e in enumerate_group(g)} == sympy_elements(g)


class TestOrbits:
    def test_constant(self):
        assert orbit_of_assignment(bits("000"), realize(Natural(3))) == {bits("000")}

    def test_weight_class(self):
        orbit = orbit_of_assignment(bits("100"), realize(Natural(3)))
        assert orbit == {bits("100"), bits("010"), bits("001")}

    def test_row_column_single_one(self):
        assert len(orbit_of_assignment(bits("1000"), realize(RowColumn(2, 2)))) == 4

    @pytest.mark.parametrize(
        "group,count",
        [(realize(Natural(3)), 4), (realize(RowColumn(2, 2)), 7), (realize(Johnson(4, 2)), 11)],
    )
    def test_all_orbits_counts(self, group, count):
        orbits = all_orbits(group)
        assert len(orbits) == count == burnside_count(group) == naive_orbit_count(group)

    def test_orbits_partition_and_representatives(self):
        g = realize(RowColumn(2, 3))
        orbits = all_orbits(g)
        seen = set()
        for orb in orbits:
            assert orb.representative == min(orb.members)
            assert seen.isdisjoint(orb.members)
            seen |= set(orb.members)
        assert len(seen) == 2**6
        assert [o.representative for o in orbits] == sorted(o.representative for o in orbits)

    def test_sweep_cap(self):
        with pytest.raises(CapExceeded):
            all_orbits(realize(Natural(5)), cap_bits=4)

    def test_burnside_trivial(self):
        assert burnside_count(GeneratedGroup.trivial(3)) == 8

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6).flatmap(lambda n: st.lists(perms(n), min_size=0, max_size=3).map(lambda gs: (n, gs))))
    def test_random_groups_orbit_count_agrees(self, case):
        n, gens = case
        g = GeneratedGroup(n, tuple(gens))
        assert len(all_orbits(g)) == burnside_count(g) == naive_orbit_count(g)


class TestSubgroups:
    def test_support(self):
        assert support(GeneratedGroup.trivial(3)) == frozenset()
        assert support(G(5, "(1 2)")) == {1, 2}
        assert support(G(5, "(1 2)(3 4)")) == {1, 2, 3, 4}

    def test_partition_canonical(self):
        p = Partition(4, ((4, 3), (2, 1)))
        assert p.cells == ((1, 2), (3, 4))
        with pytest.raises(SpecError):
            Partition(3, ((1, 2),))

    def test_stabilizer_sym(self):
        h = partition_stabilizer(realize(Natural(4)), Partition(4, ((1, 2), (3, 4))))
        assert h.order() == 4

    def test_stabilizer_discrete(self):
        h = partition_stabilizer(realize(Natural(3)), Partition(3, ((1,), (2,), (3,))))
        assert h.order() == 1

    def test_stabilizer_filtered(self):
        h = partition_stabilizer(G(3, "(1 2 3)"), Partition(3, ((1, 2), (3,))))
        assert h.order() == 1

    def test_stabilizer_fixes_cells(self):
        p = Partition(6, ((1, 4), (2, 3, 5), (6,)))
        h = partition_stabilizer(G(6, "(1 2 3 4 5 6)", "(1 4)(2 5)", "(2 3)"), p)
        for e in enumerate_group(h):
            for cell in p.cells:
                assert {e(x) for x in cell} == set(cell)

    def test_coset_reps(self):
        s3 = realize(Natural(3))
        assert [str(r) for r in right_coset_reps(s3, s3)] == ["()"]
        assert len(right_coset_reps(s3, G(3, "(1 2)"))) == 3
        assert len(right_coset_reps(s3, G(3, "(1 2 3)"))) == 2

    def test_coset_reps_cover_distinct_cosets(self):
        g, h = realize(Natural(4)), G(4, "(1 2)", "(3 4)")
        reps = right_coset_reps(g, h)
        h_elems = enumerate_group(h)
        cosets = [frozenset(compose(y, r) for y in h_elems) for r in reps]
        assert len(set(cosets)) == len(reps) == 6
        assert set().union(*cosets) == set(enumerate_group(g))

    def test_not_subgroup(self):
        with pytest.raises(NotSubgroup):
            right_coset_reps(G(3, "(1 2 3)"), G(3, "(1 2)"))

    def test_all_assignments_lex(self):
        assert [format_bits(t) for t in all_assignments(2)] == ["00", "01", "10", "11"]

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import JACOBSON_M1, JACOBSON_M2, JACOBSON_P1, SHIFT, WEYL, M
from orediag.coeff import UniPoly
from orediag.jacobson import (
    CYCLIC,
    PROPER,
    JacobsonError,
    cyclic_annihilator,
    dimension_invariant,
    jacobson_form,
    random_candidate,
)
from orediag.modgb import RationalModuleBasis
from orediag.ore import OreMatrix, OrePoly, mul
from orediag.parse import parse_expression


def E(text):
    return parse_expression(text, WEYL)


@pytest.fixture(scope="module")
def m1():
    return M(WEYL, JACOBSON_M1)


@pytest.fixture(scope="module")
def m2():
    return M(WEYL, JACOBSON_M2)


class TestDimension:
    def test_examples(self, m1):
        assert dimension_invariant(m1) == 6
        assert dimension_invariant(OreMatrix.identity(WEYL, 3)) == 0
        assert dimension_invariant(OreMatrix.diagonal(WEYL, [E("d"), E("d^2+x")])) == 3

    def test_rejects_non_diagonal(self, example_a):
        with pytest.raises(JacobsonError):
            dimension_invariant(example_a)

    def test_rejects_zero_entry(self):
        with pytest.raises(JacobsonError):
            dimension_invariant(OreMatrix.diagonal(WEYL, [E("d"), OrePoly.zero(WEYL)]))


class TestCandidates:
    def test_shape(self, m1):
        p = random_candidate(m1, degree_bound_x=3, seed=5)
        assert [e.degree for e in p] == [0, 1, 2]
        for e in p:
            assert all(a <= 3 for (_, a) in e.terms())
            assert all(0 <= c < 100 for c in e.terms().values())

    def test_unit_entries_are_zero(self):
        D = OreMatrix.diagonal(WEYL, [E("1"), E("d")])
        assert random_candidate(D, seed=1)[0].is_zero()

    def test_deterministic(self, m1):
        assert random_candidate(m1, seed=3) == random_candidate(m1, seed=3)
        assert random_candidate(m1, seed=3) != random_candidate(m1, seed=4)

    def test_empty_range(self, m1):
        with pytest.raises(ValueError):
            random_candidate(m1, coeff_range=(5, 5))


class TestAnnihilator:
    def test_single_operator(self):
        att = cyclic_annihilator(M(WEYL, [["d"]]), [E("1")])
        assert att.status == CYCLIC and att.c == E("d")

    def test_reference_candidate(self, m1):
        p = [E(t) for t in JACOBSON_P1]
        att = cyclic_annihilator(m1, p)
        assert att.status == CYCLIC and att.c.degree == 6
        lead = att.c.coeff(6)
        x = UniPoly.x()
        assert lead == 1011752 * x**8 - 348435 * x**7 - 846320 * x**5 - 2965480 * x**4
        s = att.stats
        assert (s.NT, s.TD, s.BC, s.SC, s.BX, s.SX) == (14, 14, 115653720, 348435, 8, 0)
        assert s.AX == pytest.approx(4.357, abs=1e-3)

    def test_membership(self, m1):
        p = [E(t) for t in JACOBSON_P1]
        att = cyclic_annihilator(m1, p)
        B = RationalModuleBasis(m1)
        assert B.contains([mul(att.c, e) for e in p])
        assert att.membership_checked

    def test_proper_submodule(self, m2):
        att = cyclic_annihilator(m2, [E("1"), E("1"), E("1")])
        assert att.status == PROPER and att.c.degree < 6

    def test_wrong_length(self, m1):
        with pytest.raises(JacobsonError):
            cyclic_annihilator(m1, [E("1")])

    def test_non_diagonal_input(self, example_a):
        att = cyclic_annihilator(example_a, [E("1"), E("0")])
        assert att.d == 2 and att.c.degree <= 2


class TestJacobsonForm:
    def test_certified_m1(self, m1):
        res = jacobson_form(m1, seed=0)
        assert res.certified
        nf = res.normal_form
        assert [nf[i, i] for i in range(2)] == [OrePoly.one(WEYL)] * 2
        assert nf[2, 2].degree == 6

    def test_determinism(self, m1):
        a = jacobson_form(m1, seed=2).to_dict()
        b = jacobson_form(m1, seed=2).to_dict()
        assert a == b

    def test_constant_candidates_on_m2(self, m2):
        res = jacobson_form(m2, seed=0, degree_bound_x=0, max_attempts=3)
        assert not res.certified
        assert [a.c.degree for a in res.attempts] == [4, 4, 4]
        assert all(a.status == PROPER for a in res.attempts)

    def test_non_diagonal_goes_through_diagonalization(self, example_a):
        res = jacobson_form(example_a, seed=1)
        assert res.certified and res.diag_result is not None
        assert res.normal_form[1, 1].degree == 2

    def test_zero_dimension(self):
        res = jacobson_form(OreMatrix.identity(WEYL, 2))
        assert res.certified and res.normal_form == OreMatrix.identity(WEYL, 2)

    def test_single_entry(self):
        res = jacobson_form(M(WEYL, [["x*d^2+1"]]))
        assert res.certified and res.normal_form == M(WEYL, [["x*d^2+1"]])

    def test_needs_weyl(self):
        with pytest.raises(JacobsonError):
            jacobson_form(OreMatrix.identity(SHIFT, 2))

    def test_needs_full_rank(self):
        with pytest.raises(JacobsonError):
            jacobson_form(M(WEYL, [["d", "x"], ["x*d", "x^2"]]))

    def test_bit_length_trend(self, m1):
        small = jacobson_form(m1, seed=0, degree_bound_x=0, max_attempts=1).attempts[0]
        large = jacobson_form(m1, seed=0, degree_bound_x=3, max_attempts=1).attempts[0]
        assert large.stats.max_bits > small.stats.max_bits

    @settings(max_examples=50)
    @given(st.integers(2, 3), st.integers(0, 10_000))
    def test_soundness_on_constant_diagonals(self, m, seed):
        # diag(d - 1, ..., d - m) has a cyclic vector and dimension m
        D = OreMatrix.diagonal(WEYL, [E(f"d-{k}") for k in range(1, m + 1)])
        res = jacobson_form(D, seed=seed, max_attempts=2)
        for att in res.attempts:
            assert att.c.degree <= m
            p = list(att.p)
            assert RationalModuleBasis(D).contains([mul(att.c, e) for e in p])
        if res.certified:
            assert res.normal_form[m - 1, m - 1].degree == m

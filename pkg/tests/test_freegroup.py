"""Free group words, conjugacy, horizontality, and the exponent-sum map."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from origami_forge.freegroup import (
    AllTrivial,
    NotUnimodular,
    Word,
    beta_hat,
    compose,
    cyclic_reduce,
    exponent_sums,
    format_word,
    gen,
    horizontal_twist_lift,
    identity,
    identity_endo,
    inner,
    is_conjugate,
    is_conjugate_horizontal,
    is_horizontal,
    lift_matrix,
    mat_det,
    mat_mul,
    parse_word,
    primitive_root,
    simultaneous_conjugacy,
    word,
)

letters = st.lists(
    st.tuples(st.integers(1, 2), st.sampled_from([-1, 1])), max_size=12
)
words = letters.map(lambda ls: Word(2, ls))


x = gen(2, 1)
y = gen(2, 2)


class TestWordAlgebra:
    def test_reduction(self):
        w = Word(2, [(1, 1), (1, -1), (2, 1)])
        assert w == y

    def test_power_and_inverse(self):
        w = parse_word("x y^-1")
        assert w * w.inv() == identity(2)
        assert w ** 3 == w * w * w
        assert w ** -2 == (w.inv()) ** 2

    @given(words, words)
    def test_inverse_of_product(self, u, v):
        assert (u * v).inv() == v.inv() * u.inv()

    @given(words)
    def test_format_parse_roundtrip(self, w):
        assert parse_word(format_word(w)) == w

    def test_parse_identity_token(self):
        assert parse_word("1") == identity(2)

    def test_exponent_sums(self):
        assert exponent_sums(parse_word("x^3 y^-1 x^-1 y^2")) == (2, 1)


class TestConjugacy:
    @given(words)
    def test_cyclic_reduce_decomposition(self, w):
        core, conj = cyclic_reduce(w)
        assert conj * core * conj.inv() == w
        if len(core):
            first, last = core.letters[0], core.letters[-1]
            assert not (first[0] == last[0] and first[1] == -last[1])

    @given(words, words)
    def test_is_conjugate_witness(self, u, g):
        v = u.conj(g)
        witness = is_conjugate(u, v)
        assert witness is not None
        assert witness * u * witness.inv() == v

    def test_non_conjugate(self):
        assert is_conjugate(x, y) is None

    def test_primitive_root(self):
        w = parse_word("x y x y x y")
        assert primitive_root(w) == parse_word("x y")

    def test_simultaneous_conjugacy(self):
        g = parse_word("x y^-1 x")
        pairs = [(x, x.conj(g)), (y, y.conj(g)), (x * y, (x * y).conj(g))]
        witness = simultaneous_conjugacy(pairs)
        assert witness is not None
        for u, v in pairs:
            assert u.conj(witness) == v

    def test_simultaneous_conjugacy_failure(self):
        assert simultaneous_conjugacy([(x, x), (y, y.conj(x) * y)]) is None

    def test_simultaneous_conjugacy_all_trivial(self):
        assert simultaneous_conjugacy(
            [(identity(2), identity(2))]
        ) == identity(2)
        with pytest.raises(AllTrivial):
            simultaneous_conjugacy([(identity(2), x)])


class TestHorizontality:
    @pytest.mark.parametrize(
        "text, flag",
        [
            ("x^4", True),
            ("x y^-1 x y", True),
            ("x^-1 y^-1 x^-1 y", True),
            ("x^2 y x^-1 y^-1", True),
            ("y x y x^-1", False),  # y-signs do not alternate
            ("y", False),
            ("y x y^-1 x", True),
            ("x y x y x^-1 y^-1 x y^-1", False),
        ],
    )
    def test_is_horizontal(self, text, flag):
        assert is_horizontal(parse_word(text)) == flag

    @given(words)
    def test_conjugates_of_horizontal_words(self, g):
        w = parse_word("x^2 y^-1 x y")
        assert is_conjugate_horizontal(w.conj(g))

    @given(words)
    def test_conjugate_horizontal_matches_rotation_scan(self, w):
        core, _ = cyclic_reduce(w)
        brute = any(
            is_horizontal(Word(2, core.letters[i:] + core.letters[:i]))
            for i in range(max(1, len(core.letters)))
        )
        assert is_conjugate_horizontal(w) == brute


class TestExponentMap:
    def test_identity_endo(self):
        assert beta_hat(identity_endo()) == (1, 0, 0, 1)

    def test_inner_in_kernel(self):
        assert beta_hat(inner(parse_word("x y^-1"))) == (1, 0, 0, 1)

    def test_twist_lift(self):
        phi = horizontal_twist_lift(3)
        assert phi(x) == x
        assert phi(y) == parse_word("x^3 y")
        assert beta_hat(phi) == (1, 3, 0, 1)

    def test_composition_is_matrix_product(self):
        a = lift_matrix((1, 1, 0, 1))
        b = lift_matrix((1, 0, 1, 1))
        assert beta_hat(compose(a, b)) == mat_mul((1, 1, 0, 1), (1, 0, 1, 1))

    def test_lift_matrix_rejects_non_unimodular(self):
        with pytest.raises(NotUnimodular):
            lift_matrix((2, 0, 0, 1))

    def test_lift_matrix_section_on_random_matrices(self):
        rng = random.Random(11)
        count = 0
        while count < 500:
            a, b = rng.randint(-20, 20), rng.randint(-20, 20)
            c, d = rng.randint(-20, 20), rng.randint(-20, 20)
            A = (a, b, c, d)
            if mat_det(A) != 1:
                continue
            count += 1
            assert beta_hat(lift_matrix(A)) == A

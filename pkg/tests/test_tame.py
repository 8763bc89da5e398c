import random

import pytest

from colstab import (
    Letter,
    Mat,
    Mode,
    NotInStab2Error,
    TameWord,
    check_stab,
    cohn_matrix,
    eval_word,
    gen_S,
    gen_T,
    identity,
    in_scheme,
    matrix_unit,
    preimage,
    prop2_check,
    rho,
    sample_tame,
    stab2,
    stab2_param,
)
from colstab.stab import CongruenceMatrix

from conftest import LAUR2, POLY2, POLY3


def _random_element(rng, ring, max_terms=2, bound=3):
    acc = ring.zero
    for _ in range(rng.randint(0, max_terms)):
        low = 0 if ring.mode is Mode.POLYNOMIAL else -1
        exps = [rng.randint(low, 2) for _ in range(ring.nvars)]
        acc = acc + ring.monomial(rng.randint(-bound, bound), exps)
    return acc


# -- generators ---------------------------------------------------------------------


def test_gen_T_frozen_example(ring3):
    t = gen_T(ring3, 3, 1, 2, ring3.const(-1))
    expected = (
        identity(ring3, 3)
        - matrix_unit(ring3, 3, 3, 1).scale(ring3.c(2))
        + matrix_unit(ring3, 3, 3, 2).scale(ring3.c(1))
    )
    assert t.mat == expected
    assert t.mat.det() == ring3.one


def test_gen_T_zero_parameter_is_identity(ring3):
    assert gen_T(ring3, 1, 2, 3, ring3.zero).mat == identity(ring3, 3)


def test_gen_T_index_constraints(ring3):
    with pytest.raises(ValueError):
        gen_T(ring3, 1, 1, 2, ring3.one)
    with pytest.raises(ValueError):
        gen_T(ring3, 1, 3, 2, ring3.one)


def test_gen_S_one_parameter_group(ring3):
    a = ring3.parse("a1 - 1")
    b = ring3.parse("a2^2 + 1")
    assert (gen_S(ring3, 1, 2, a) * gen_S(ring3, 1, 2, b)).mat == gen_S(
        ring3, 1, 2, a + b
    ).mat
    assert gen_S(ring3, 1, 2, ring3.zero).mat == identity(ring3, 3)
    with pytest.raises(ValueError):
        gen_S(ring3, 2, 1, a)


def test_generators_certify_with_ring_parameters(ring3):
    rng = random.Random(7)
    for _ in range(20):
        a = _random_element(rng, ring3)
        assert gen_T(ring3, 2, 1, 3, a).certified
        assert gen_S(ring3, 1, 3, a).certified
        assert gen_T(ring3, 3, 1, 2, a).mat.det() == ring3.one
        assert gen_S(ring3, 2, 3, a).mat.det() == ring3.one


# -- the two-variable stabilizer -------------------------------------------------------


def test_stab2_examples(ring2):
    assert stab2(ring2.zero) == identity(ring2, 2)
    assert stab2_param(identity(ring2, 2)) == ring2.zero
    a = ring2.parse("a1*a2 - 2")
    b = ring2.parse("a2")
    assert stab2(a) * stab2(b) == stab2(a + b)


def test_stab2_rejects_determinant_other_than_one(ring2):
    c1, c2 = ring2.c(1), ring2.c(2)
    shaped = Mat(
        [
            [ring2.one + c2 * c2, -c2 * c1],
            [ring2.zero, ring2.one],
        ]
    )
    assert shaped.apply_column([c1, c2]) == [c1, c2]
    with pytest.raises(NotInStab2Error):
        stab2_param(shaped)


def test_stab2_rejects_non_stabilizing(ring2):
    with pytest.raises(NotInStab2Error) as err:
        stab2_param(Mat([[ring2.one, ring2.one], [ring2.zero, ring2.one]]))
    assert err.value.witness is not None


def test_stab2_group_isomorphism_random(ring2):
    rng = random.Random(9)
    for _ in range(50):
        a = _random_element(rng, ring2)
        b = _random_element(rng, ring2)
        m = stab2(a)
        assert m.apply_column([ring2.c(1), ring2.c(2)]) == [ring2.c(1), ring2.c(2)]
        assert m.det() == ring2.one
        assert stab2(a) * stab2(b) == stab2(a + b)
        assert stab2_param(stab2(a)) == a


# -- words --------------------------------------------------------------------------


def test_empty_word_evaluates_to_identity(ring3):
    assert eval_word(ring3, sample_tame(ring3, 5, 0)).mat == identity(ring3, 3)


def test_sampler_is_deterministic(ring3):
    first = sample_tame(ring3, 42, 5)
    second = sample_tame(ring3, 42, 5)
    assert first == second
    assert eval_word(ring3, first).mat == eval_word(ring3, second).mat


def test_explicit_word_stabilizes(ring3):
    word = TameWord(
        (
            Letter("T", (3, 1, 2), ring3.one),
            Letter("S", (1, 2), ring3.one),
        )
    )
    assert eval_word(ring3, word).certified


def test_sampled_words_certify(ring3):
    for seed in range(20):
        word = sample_tame(ring3, seed, seed % 9)
        a = eval_word(ring3, word)
        assert a.certified
        assert in_scheme(rho(a).mat)


def test_word_image_is_product_of_letter_images(ring3):
    for seed in range(10):
        word = sample_tame(ring3, seed, 5)
        total = identity(ring3, 2)
        for letter in word.letters:
            total = total * rho(eval_word(ring3, TameWord((letter,)))).mat
        assert rho(eval_word(ring3, word)).mat == total


def test_word_json_round_trip(ring3):
    word = sample_tame(ring3, 3, 6)
    data = word.to_json()
    assert TameWord.from_json(ring3, data) == word
    assert data and all(set(obj) >= {"kind", "a"} for obj in data)


# -- triangular images ----------------------------------------------------------------


def test_prop2_examples(ring3):
    a = ring3.parse("a1 + 2")
    assert rho(gen_T(ring3, 3, 1, 2, a)).mat == Mat(
        [[ring3.one, -a], [ring3.zero, ring3.one]]
    )
    c2 = ring3.c(2)
    assert rho(gen_T(ring3, 1, 2, 3, a)).mat == Mat(
        [[ring3.one, ring3.zero], [a * c2 * c2, ring3.one]]
    )
    assert rho(gen_S(ring3, 1, 2, a)).mat == identity(ring3, 2)


def test_all_generator_tokens_have_triangular_images(ring3):
    rng = random.Random(13)
    tokens = [("T", idx) for idx in ((1, 2, 3), (2, 1, 3), (3, 1, 2))]
    tokens += [("S", idx) for idx in ((1, 2), (1, 3), (2, 3))]
    for kind, indices in tokens:
        for _ in range(20):
            letter = Letter(kind, indices, _random_element(rng, ring3))
            assert prop2_check(ring3, letter)


# -- the Cohn matrix ------------------------------------------------------------------


def test_cohn_matrix_contract():
    m = cohn_matrix(POLY2)
    a1, a2 = POLY2.var(1), POLY2.var(2)
    assert m == Mat([[1 + a1 * a2, -(a1 * a1)], [a2 * a2, 1 - a1 * a2]])
    assert m.det() == POLY2.one
    assert in_scheme(m)


def test_cohn_matrix_needs_polynomial_mode():
    with pytest.raises(ValueError):
        cohn_matrix(LAUR2)


def test_cohn_matrix_preimage_succeeds():
    report = preimage(CongruenceMatrix(cohn_matrix(POLY3)))
    assert report.ok
    assert check_stab(report.preimage.mat).certified

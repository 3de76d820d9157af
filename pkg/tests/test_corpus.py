from cubicjac import CASE1, CASE2, CASE3, FORM_II, TRIANGULARIZABLE
from cubicjac.corpus import (
    classification_corpus,
    dependence_corpus,
    form_i_scrambles,
    form_ii_scrambles,
    nilpotent_2x2_corpus,
    rank1_corpus,
    triangular_scrambles,
)
from cubicjac.jacobian import is_nilpotent, jacobian, jacobian_rank


def test_same_seed_same_instances():
    assert classification_corpus(9, per_case=3) == classification_corpus(9, per_case=3)
    assert dependence_corpus(9, 8) == dependence_corpus(9, 8)
    assert triangular_scrambles(9, 5) == triangular_scrambles(9, 5)
    assert rank1_corpus(9, 6) == rank1_corpus(9, 6)
    assert nilpotent_2x2_corpus(9, 10) == nilpotent_2x2_corpus(9, 10)


def test_different_seeds_differ():
    assert classification_corpus(1, per_case=3) != classification_corpus(2, per_case=3)


def test_classification_corpus_shape():
    corpus = classification_corpus(3, per_case=4)
    assert [i.label for i in corpus] == [CASE1] * 4 + [CASE2] * 4 + [CASE3] * 4
    for inst in corpus:
        assert inst.H.is_cubic_homogeneous() and jacobian_rank(inst.H) <= 2


def test_dependence_corpus_labels():
    for inst in dependence_corpus(4, 12):
        r = jacobian_rank(inst.H)
        assert inst.H.m == 3
        assert (r < 3) == (inst.label == "rank<=2")


def test_keller_corpora_are_nilpotent():
    for inst in form_ii_scrambles(5, 2, 4) + triangular_scrambles(5, 4) + form_i_scrambles(5, 2):
        assert is_nilpotent(jacobian(inst.H))[0]
    assert {i.label for i in form_ii_scrambles(5, 2, 5)} == {FORM_II}
    assert {i.label for i in triangular_scrambles(5, 2)} == {TRIANGULARIZABLE}


def test_rank1_corpus():
    for inst in rank1_corpus(6, 6):
        assert jacobian_rank(inst.H) <= 1
        if inst.label == "nilpotent":
            assert is_nilpotent(jacobian(inst.H))[0]


def test_nilpotent_samples_rebuild():
    for s in nilpotent_2x2_corpus(7, 20):
        assert s.N.trace().is_zero() and s.N.det().is_zero()

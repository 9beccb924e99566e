import itertools

import pytest
from hypothesis import given, strategies as st

from gencover.words import (
    Code, MatrixWord, Word, ball_size, enumerate_matrices, enumerate_words,
    hamming_distance, t_distance, t_weight,
)


def W(s, q=2):
    return Word.from_str(s, q)


def M(*rows, q=2):
    return MatrixWord.from_strs(rows, q)


def test_hamming_examples():
    assert hamming_distance(W("000"), W("111")) == 3
    assert hamming_distance(W("0110"), W("0110")) == 0
    assert hamming_distance(W("012", 3), W("022", 3)) == 1


@pytest.mark.parametrize("u,v", [(W("00"), W("000")), (W("01"), W("01", 3))])
def test_hamming_rejects_mismatch(u, v):
    with pytest.raises(ValueError):
        hamming_distance(u, v)


def test_t_weight_examples():
    assert t_weight(M("101", "001")) == 2
    assert t_weight(MatrixWord.zeros(3, 4, 2)) == 0
    assert t_weight(M("10", "01")) == 2


def test_t_distance_examples():
    a = M("00", "00")
    assert t_distance(a, a) == 0
    assert t_distance(a, M("10", "01")) == 2
    assert t_distance(M("0121", q=3), M("2101", q=3)) == hamming_distance(W("0121", 3), W("2101", 3))


def test_t_distance_shape_mismatch():
    with pytest.raises(ValueError):
        t_distance(M("00", "00"), M("00"))


@pytest.mark.parametrize("q,t,n", [(q, t, n) for q in (2, 3) for t in (1, 2) for n in range(1, 5)
                                   if q ** (t * n) <= 729])
def test_metric_axioms_exhaustive(q, t, n):
    mats = list(enumerate_matrices(t, n, q))
    for a in mats:
        assert t_distance(a, a) == 0
    for a, b in itertools.product(mats, repeat=2):
        d = t_distance(a, b)
        assert d == t_distance(b, a)
        assert (d == 0) == (a == b)
    # triangle inequality on a sampled slice of triples keeps this test fast
    sample = mats[:: max(1, len(mats) // 27)]
    for a, b, c in itertools.product(sample, repeat=3):
        assert t_distance(a, c) <= t_distance(a, b) + t_distance(b, c)


@pytest.mark.parametrize("q,t,n", [(2, 2, 3), (3, 1, 4), (2, 1, 4), (3, 2, 2)])
def test_translation_invariance_exhaustive(q, t, n):
    mats = list(enumerate_matrices(t, n, q))
    shifts = mats[:: max(1, len(mats) // 8)]
    for a, b in itertools.product(mats[:: max(1, len(mats) // 40)], repeat=2):
        d = t_distance(a, b)
        for c in shifts:
            assert t_distance(a + c, b + c) == d


@given(st.data())
def test_column_permutation_invariance(data):
    q = data.draw(st.integers(2, 4))
    n = data.draw(st.integers(1, 6))
    t = data.draw(st.integers(1, 3))
    row = st.lists(st.integers(0, q - 1), min_size=n, max_size=n)
    a = MatrixWord(tuple(Word(tuple(data.draw(row)), q) for _ in range(t)))
    b = MatrixWord(tuple(Word(tuple(data.draw(row)), q) for _ in range(t)))
    perm = data.draw(st.permutations(range(n)))
    assert t_distance(a.permute_columns(perm), b.permute_columns(perm)) == t_distance(a, b)


def test_ball_size_examples():
    assert ball_size(2, 0, 5, 3) == 1
    assert ball_size(2, 1, 2, 2) == 7
    for t, n, q in [(1, 4, 2), (2, 3, 3), (3, 2, 2)]:
        assert ball_size(t, n, n, q) == q ** (t * n)
    with pytest.raises(ValueError):
        ball_size(1, -1, 3, 2)
    with pytest.raises(ValueError):
        ball_size(1, 4, 3, 2)


def test_ball_size_t2_brute_force():
    # 2x2 binary matrices with at most one nonzero column
    count = sum(1 for m in enumerate_matrices(2, 2, 2) if t_weight(m) <= 1)
    assert count == 7


@pytest.mark.parametrize("n", range(1, 5))
def test_ball_size_matches_enumeration(n):
    zero = MatrixWord.zeros(2, n, 2)
    dists = [t_distance(zero, m) for m in enumerate_matrices(2, n, 2)]
    for r in range(n + 1):
        assert ball_size(2, r, n, 2) == sum(1 for d in dists if d <= r)


@given(st.integers(1, 3), st.integers(1, 40), st.integers(2, 5), st.data())
def test_ball_size_alphabet_lift(t, n, q, data):
    r = data.draw(st.integers(0, n))
    assert ball_size(t, r, n, q) == ball_size(1, r, n, q**t)


def test_ball_size_is_exact_for_large_n():
    v = ball_size(2, 128, 256, 3)
    assert isinstance(v, int)
    assert v.bit_length() > 600


def test_enumeration_order_and_counts():
    assert [str(w) for w in enumerate_words(1, 3)] == ["0", "1", "2"]
    assert len(list(enumerate_words(3, 2))) == 8
    assert list(enumerate_words(4, 3))[0] == Word.zeros(4, 3)
    assert next(iter(enumerate_matrices(2, 3, 2))) == MatrixWord.zeros(2, 3, 2)
    words = list(enumerate_words(3, 3))
    assert words == sorted(words)
    assert [w.index() for w in words] == list(range(27))


def test_enumeration_restartable_from_index():
    full = list(enumerate_words(3, 3))
    assert list(enumerate_words(3, 3, start=10, stop=20)) == full[10:20]
    mats = list(enumerate_matrices(2, 2, 2))
    assert len(mats) == 16 and len(set(mats)) == 16
    assert list(enumerate_matrices(2, 2, 2, start=5)) == mats[5:]
    assert [m.flat() for m in mats] == sorted(m.flat() for m in mats)


def test_word_validation():
    with pytest.raises(ValueError):
        Word((0, 3), 3)
    with pytest.raises(ValueError):
        Word((), 2)
    with pytest.raises(ValueError):
        Word((0,), 1)


def test_code_rejects_duplicates_and_mixed_lengths():
    with pytest.raises(ValueError):
        Code.from_strs(["01", "01"], 2)
    with pytest.raises(ValueError):
        Code.from_words([W("01"), W("011")])


def test_code_file_roundtrip(tmp_path):
    code = Code.from_strs(["0210", "1111", "2002"], 3)
    path = tmp_path / "c.code"
    code.save(path)
    assert path.read_text() == "q=3 n=4\n0210\n1111\n2002\n"
    assert Code.load(path) == code


@pytest.mark.parametrize("text", [
    "q=3 n=4\n0213\n",      # digit out of range
    "q=2 n=3\n010\n01\n",   # ragged
    "n=3\n010\n",           # header without q
    "",
])
def test_code_file_rejects_bad_input(text):
    with pytest.raises(ValueError):
        Code.from_text(text)


@pytest.mark.parametrize("q,t,n", [(2, 2, 4), (3, 1, 4), (3, 2, 4)])
def test_triangle_via_subadditivity_exhaustive(q, t, n):
    # a translation-invariant distance satisfies the triangle inequality iff
    # its weight is subadditive: wt(x + y) <= wt(x) + wt(y) for all x, y
    import numpy as np

    mats = np.array([m.flat() for m in enumerate_matrices(t, n, q)], dtype=np.int16).reshape(-1, t, n)
    weight = (mats != 0).any(axis=1).sum(axis=1)
    sample = enumerate_matrices(t, n, q, stop=50)
    assert [t_weight(m) for m in sample] == list(weight[:50])
    for start in range(0, len(mats), 256):
        block = mats[start:start + 256]
        s = (block[:, None] + mats[None, :]) % q
        ws = (s != 0).any(axis=2).sum(axis=2)
        assert (ws <= weight[start:start + 256, None] + weight[None, :]).all()

"""Words, matrices and codes over Z_q, plus Hamming / t-metrics and exact ball sizes.

Words are stored as digit tuples.  Everything performance sensitive works on
word *indices* instead: the index of a word is its digit string read as a
base-q number with the first digit most significant, so integer order is
lexicographic order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class Alphabet:
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.q}")


@dataclass(frozen=True, order=True)
class Word:
    digits: tuple[int, ...]
    q: int

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if self.q < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.q}")
        if not self.digits:
            raise ValueError("word length must be >= 1")
        for d in self.digits:
            if not 0 <= d < self.q:
                raise ValueError(f"digit {d} out of range for q={self.q}")

    @property
    def n(self) -> int:
        return len(self.digits)

    @classmethod
    def from_str(cls, s: str, q: int) -> "Word":
        try:
            digits = [DIGIT_CHARS.index(ch) for ch in s.strip().lower()]
        except ValueError:
            raise ValueError(f"bad digit in word {s!r}") from None
        return cls(tuple(digits), q)

    @classmethod
    def from_index(cls, index: int, n: int, q: int) -> "Word":
        if not 0 <= index < q**n:
            raise ValueError(f"index {index} out of range for n={n}, q={q}")
        digits = []
        for _ in range(n):
            index, d = divmod(index, q)
            digits.append(d)
        return cls(tuple(reversed(digits)), q)

    @classmethod
    def zeros(cls, n: int, q: int) -> "Word":
        return cls((0,) * n, q)

    def index(self) -> int:
        idx = 0
        for d in self.digits:
            idx = idx * self.q + d
        return idx

    def support(self) -> int:
        """Bitmask of nonzero positions (bit i <-> position i)."""
        mask = 0
        for i, d in enumerate(self.digits):
            if d:
                mask |= 1 << i
        return mask

    def weight(self) -> int:
        return sum(1 for d in self.digits if d)

    def __add__(self, other: "Word") -> "Word":
        _check_compatible(self, other)
        return Word(tuple((a + b) % self.q for a, b in zip(self.digits, other.digits)), self.q)

    def __sub__(self, other: "Word") -> "Word":
        _check_compatible(self, other)
        return Word(tuple((a - b) % self.q for a, b in zip(self.digits, other.digits)), self.q)

    def permute(self, perm: Sequence[int]) -> "Word":
        """Word whose position i holds this word's digit at ``perm[i]``."""
        return Word(tuple(self.digits[p] for p in perm), self.q)

    def __str__(self) -> str:
        return "".join(DIGIT_CHARS[d] for d in self.digits)


def _check_compatible(u: Word, v: Word) -> None:
    if u.q != v.q:
        raise ValueError(f"alphabet mismatch: q={u.q} vs q={v.q}")
    if u.n != v.n:
        raise ValueError(f"length mismatch: n={u.n} vs n={v.n}")


@dataclass(frozen=True)
class MatrixWord:
    rows: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise ValueError("a matrix needs at least one row")
        first = self.rows[0]
        for row in self.rows[1:]:
            _check_compatible(first, row)

    @property
    def t(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.rows[0].n

    @property
    def q(self) -> int:
        return self.rows[0].q

    @classmethod
    def from_strs(cls, rows: Iterable[str], q: int) -> "MatrixWord":
        return cls(tuple(Word.from_str(r, q) for r in rows))

    @classmethod
    def zeros(cls, t: int, n: int, q: int) -> "MatrixWord":
        return cls((Word.zeros(n, q),) * t)

    def flat(self) -> tuple[int, ...]:
        return tuple(d for row in self.rows for d in row.digits)

    def __add__(self, other: "MatrixWord") -> "MatrixWord":
        _check_shape(self, other)
        return MatrixWord(tuple(a + b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: "MatrixWord") -> "MatrixWord":
        _check_shape(self, other)
        return MatrixWord(tuple(a - b for a, b in zip(self.rows, other.rows)))

    def permute_columns(self, perm: Sequence[int]) -> "MatrixWord":
        return MatrixWord(tuple(r.permute(perm) for r in self.rows))

    def __str__(self) -> str:
        return ",".join(str(r) for r in self.rows)


def _check_shape(a: MatrixWord, b: MatrixWord) -> None:
    if a.t != b.t:
        raise ValueError(f"row count mismatch: t={a.t} vs t={b.t}")
    _check_compatible(a.rows[0], b.rows[0])


@dataclass(frozen=True)
class Code:
    """An (n, M)_q code: distinct words of common length, kept in lexicographic order."""

    words: tuple[Word, ...]
    n: int
    q: int

    def __post_init__(self):
        words = tuple(sorted(self.words))
        if len(set(words)) != len(words):
            raise ValueError("code contains duplicate words")
        for w in words:
            if w.n != self.n or w.q != self.q:
                raise ValueError(f"word {w} does not match n={self.n}, q={self.q}")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_words(cls, words: Iterable[Word], n: int | None = None, q: int | None = None) -> "Code":
        words = tuple(words)
        if n is None or q is None:
            if not words:
                raise ValueError("n and q are required for an empty code")
            n, q = words[0].n, words[0].q
        return cls(words, n, q)

    @classmethod
    def from_strs(cls, words: Iterable[str], q: int) -> "Code":
        ws = [Word.from_str(s, q) for s in words]
        return cls.from_words(ws)

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int, q: int) -> "Code":
        return cls(tuple(Word.from_index(int(i), n, q) for i in indices), n, q)

    @classmethod
    def whole_space(cls, n: int, q: int) -> "Code":
        return cls.from_indices(range(q**n), n, q)

    @property
    def M(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __contains__(self, w: object) -> bool:
        return w in set(self.words)

    def indices(self) -> np.ndarray:
        return np.array([w.index() for w in self.words], dtype=np.int64)

    def translate(self, x: Word) -> "Code":
        return Code(tuple(w + x for w in self.words), self.n, self.q)

    def to_text(self) -> str:
        lines = [f"q={self.q} n={self.n}"]
        lines.extend(str(w) for w in self.words)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Code":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty code file")
        header = dict(part.split("=", 1) for part in lines[0].split())
        try:
            q, n = int(header["q"]), int(header["n"])
        except (KeyError, ValueError):
            raise ValueError(f"bad header line {lines[0]!r}, expected 'q=<q> n=<n>'") from None
        if q > len(DIGIT_CHARS):
            raise ValueError(f"q={q} cannot be written one character per digit")
        words = []
        for lineno, ln in enumerate(lines[1:], start=2):
            if len(ln) != n:
                raise ValueError(f"line {lineno}: expected {n} digits, got {len(ln)}")
            words.append(Word.from_str(ln, q))
        return cls(tuple(words), n, q)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8", newline="\n")

    @classmethod
    def load(cls, path: str | Path) -> "Code":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def hamming_distance(u: Word, v: Word) -> int:
    _check_compatible(u, v)
    return sum(1 for a, b in zip(u.digits, v.digits) if a != b)


def t_weight(m: MatrixWord) -> int:
    """Number of columns with at least one nonzero entry."""
    mask = 0
    for row in m.rows:
        mask |= row.support()
    return mask.bit_count()


def t_distance(a: MatrixWord, b: MatrixWord) -> int:
    _check_shape(a, b)
    return t_weight(b - a)


def ball_size(t: int, r: int, n: int, q: int) -> int:
    """Exact number of t x n matrices over Z_q with at most r nonzero columns."""
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside [0, {n}]")
    if t < 1 or q < 2:
        raise ValueError("need t >= 1 and q >= 2")
    base = q**t - 1
    return sum(comb(n, i) * base**i for i in range(r + 1))


def enumerate_words(n: int, q: int, start: int = 0, stop: int | None = None) -> Iterator[Word]:
    """All q^n words in lexicographic order, optionally the index slice [start, stop)."""
    total = q**n
    stop = total if stop is None else min(stop, total)
    if start == 0 and stop == total:
        for digits in itertools.product(range(q), repeat=n):
            yield Word(digits, q)
        return
    for idx in range(start, stop):
        yield Word.from_index(idx, n, q)


def enumerate_matrices(t: int, n: int, q: int, start: int = 0, stop: int | None = None) -> Iterator[MatrixWord]:
    """All q^(tn) t x n matrices, lexicographic on the row-major flattening."""
    size = q**n
    total = size**t
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        rows = []
        for _ in range(t):
            idx, r = divmod(idx, size)
            rows.append(Word.from_index(r, n, q))
        yield MatrixWord(tuple(reversed(rows)))


# ---------------------------------------------------------------------------
# index-level helpers used by the fast engines


@lru_cache(maxsize=64)
def digit_table(n: int, q: int) -> np.ndarray:
    """(q^n, n) array; row i holds the digits of word index i."""
    idx = np.arange(q**n, dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    table = (idx[:, None] // powers[None, :]) % q
    table = table.astype(np.int8)
    table.setflags(write=False)
    return table


def support_masks(n: int, q: int, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """masks[i, j] = support bitmask of word(rows[i]) - word(cols[j])."""
    if n > 62:
        raise ValueError("support masks need n <= 62")
    table = digit_table(n, q)
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if q == 2:
        # binary words: the difference support is the XOR, up to bit order
        x = rows[:, None] ^ cols[None, :]
        return _reverse_bits(x, n)
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    diff = table[rows][:, None, :] != table[cols][None, :, :]
    return diff.astype(np.int64) @ weights


def _reverse_bits(x: np.ndarray, n: int) -> np.ndarray:
    # index bit n-1-i is position i; map to mask bit i
    out = np.zeros_like(x)
    for i in range(n):
        out |= ((x >> (n - 1 - i)) & 1) << i
    return out


def popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x)

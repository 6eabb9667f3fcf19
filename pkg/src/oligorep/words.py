"""Reduced words in the free group on two generators.

A word is a tuple of nonzero ints: 1 = x, -1 = x^-1, 2 = y, -2 = y^-1,
always freely reduced.  This module also hosts the Magnus power-series
machinery used for the bi-invariant order: x maps to 1 + X, y to 1 + Y in
noncommuting formal variables, inverses expand as geometric series, and
words are compared by the first differing coefficient in graded
lexicographic monomial order (X before Y within a degree).

All coefficients are exact integers.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import UndecidedComparison

EMPTY: tuple = ()
LETTERS = (1, -1, 2, -2)


def mult(u: tuple, v: tuple) -> tuple:
    """Concatenate and freely reduce.  Inputs need not be reduced."""
    out: list = []
    for letter in (*u, *v):
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inv(u: tuple) -> tuple:
    return tuple(-letter for letter in reversed(u))


def conj(u: tuple, by: tuple) -> tuple:
    """by * u * by^-1"""
    return mult(mult(by, u), inv(by))


def is_reduced(u: tuple) -> bool:
    return all(u[i] != -u[i + 1] for i in range(len(u) - 1))


def word_key(u: tuple) -> tuple:
    """Sort key: by length, then by letter sequence."""
    return (len(u), tuple(LETTERS.index(letter) for letter in u))


@lru_cache(maxsize=32)
def ball(radius: int) -> tuple:
    """All reduced words of length <= radius, deterministic order."""
    words = [EMPTY]
    frontier = [EMPTY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for letter in LETTERS:
                if w and w[-1] == -letter:
                    continue
                nxt.append(w + (letter,))
        words.extend(nxt)
        frontier = nxt
    return tuple(words)


def sphere(radius: int) -> tuple:
    return tuple(w for w in ball(radius) if len(w) == radius)


def random_word(rng, max_len: int, nontrivial: bool = False) -> tuple:
    """Uniform length in [0, max_len] (or [1, max_len]), then a uniform
    reduced word of that length."""
    lo = 1 if nontrivial else 0
    n = rng.randrange(lo, max_len + 1)
    out: list = []
    for _ in range(n):
        options = [letter for letter in LETTERS if not (out and out[-1] == -letter)]
        out.append(options[rng.randrange(len(options))])
    return tuple(out)


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def word_int(u: tuple) -> int:
    """Injective encoding of a reduced word as a nonnegative int."""
    code = 0
    for letter in u:
        code = code * 4 + LETTERS.index(letter) + 1
    return code


def pair_coin(seed: int, u: tuple) -> bool:
    """Deterministic Bernoulli(1/2) draw attached to the pair {u, u^-1}.

    Used to sample symmetric generating sets lazily: materializing a
    radius-12 ball just to flip coins is out of the question.
    """
    rep = min(u, inv(u), key=word_key)
    h = _splitmix64(seed ^ _splitmix64(word_int(rep)))
    return bool(h & 1)


# ---------------------------------------------------------------------------
# Magnus expansion
# ---------------------------------------------------------------------------
# Monomials in X, Y are tuples over {0, 1} (0 = X, 1 = Y).  A series is held
# as a list of per-degree dicts {monomial: int}; degree 0 is always {(): 1}
# for the series we build (group elements are units of the form 1 + higher).

_VAR_OF_GEN = {1: 0, 2: 1}


def _letter_component(letter: int, degree: int) -> int:
    """Coefficient of V^degree in the expansion of the letter, where V is the
    letter's variable.  Positive letters give 1 + V; inverses expand as the
    geometric series 1 - V + V^2 - ..."""
    if degree == 0:
        return 1
    if letter > 0:
        return 1 if degree == 1 else 0
    return (-1) ** degree


def _expand(word: tuple, max_degree: int) -> list:
    comps: list = [{(): 1}]
    comps.extend({} for _ in range(max_degree))
    for letter in word:
        var = _VAR_OF_GEN[abs(letter)]
        new: list = [dict() for _ in range(max_degree + 1)]
        for d in range(max_degree + 1):
            acc = new[d]
            for j in range(d + 1):
                coeff = _letter_component(letter, j)
                if coeff == 0:
                    continue
                tail = (var,) * j
                for mono, c in comps[d - j].items():
                    key = mono + tail
                    val = acc.get(key, 0) + c * coeff
                    if val:
                        acc[key] = val
                    elif key in acc:
                        del acc[key]
        comps = new
    return comps


class _MagnusCache:
    def __init__(self) -> None:
        self._store: dict = {}

    def components(self, word: tuple, max_degree: int) -> list:
        got = self._store.get(word)
        if got is None or len(got) <= max_degree:
            got = _expand(word, max_degree)
            self._store[word] = got
        return got

    def clear(self) -> None:
        self._store.clear()


_cache = _MagnusCache()


def magnus_component(word: tuple, degree: int) -> dict:
    """Homogeneous degree-d part of the Magnus expansion."""
    return _cache.components(word, degree)[degree]


def magnus_compare(u: tuple, v: tuple, max_degree: int = 10) -> str:
    """Compare u and v in the bi-invariant order.

    Returns "<", ">" or "=".  "=" only for equal reduced words.  If the
    expansions agree through max_degree (impossible for distinct words once
    the degree is large enough, but we never search past the bound), raises
    UndecidedComparison instead of guessing.
    """
    if u == v:
        return "="
    for degree in range(1, max_degree + 1):
        cu = magnus_component(u, degree)
        cv = magnus_component(v, degree)
        if cu == cv:
            continue
        monos = sorted(set(cu) | set(cv))
        for mono in monos:
            diff = cv.get(mono, 0) - cu.get(mono, 0)
            if diff > 0:
                return "<"
            if diff < 0:
                return ">"
    raise UndecidedComparison(
        f"words agree through degree {max_degree}: {u!r} vs {v!r}"
    )


def is_positive(w: tuple, max_degree: int = 10) -> bool:
    return magnus_compare(EMPTY, w, max_degree) == "<"

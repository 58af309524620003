"""Words and conjugacy classes in the rank-g free group.

Letters are indices 0..2g-1 with inverse(i) = (i+g) mod 2g; indices below g
print as a1..ag, the rest as A1..Ag. Conjugacy classes are cyclically reduced
words up to rotation (orientation preserved: a class and its inverse differ),
with the lexicographically minimal rotation as canonical representative.
"""

from __future__ import annotations

import dataclasses


def inverse_letter(i: int, g: int) -> int:
    return (i + g) % (2 * g)


@dataclasses.dataclass(frozen=True)
class Word:
    g: int
    letters: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


@dataclasses.dataclass(frozen=True)
class ConjugacyClass:
    representative: Word
    primitive: bool

    def __repr__(self) -> str:
        star = "" if self.primitive else "^"
        return f"Class({format_word(self.representative)!r}{star})"


def reduce(g: int, raw) -> Word:
    """Free reduction: cancel adjacent (i, inverse(i)) pairs with a stack."""
    out: list[int] = []
    for i in raw:
        if out and out[-1] == inverse_letter(i, g):
            out.pop()
        else:
            out.append(int(i))
    return Word(g=g, letters=tuple(out))


def cyclic_reduce(w: Word) -> Word:
    letters = list(reduce(w.g, w.letters).letters)
    while len(letters) >= 2 and letters[0] == inverse_letter(letters[-1], w.g):
        letters = letters[1:-1]
    return Word(g=w.g, letters=tuple(letters))


def is_reduced(w: Word) -> bool:
    return all(w.letters[i + 1] != inverse_letter(w.letters[i], w.g)
               for i in range(len(w.letters) - 1))


def is_cyclically_reduced(w: Word) -> bool:
    if not w.letters:
        return True
    if not is_reduced(w):
        return False
    return len(w.letters) == 1 or w.letters[0] != inverse_letter(w.letters[-1], w.g)


def concat(a: Word, b: Word) -> Word:
    return reduce(a.g, a.letters + b.letters)


def word_inverse(w: Word) -> Word:
    return Word(g=w.g, letters=tuple(inverse_letter(i, w.g)
                                     for i in reversed(w.letters)))


def word_power(w: Word, k: int) -> Word:
    if k < 0:
        return word_power(word_inverse(w), -k)
    return reduce(w.g, w.letters * k)


def rotations(w: Word):
    n = len(w.letters)
    for r in range(n):
        yield w.letters[r:] + w.letters[:r]


def canonical_rotation(w: Word) -> Word:
    if not w.letters:
        return w
    return Word(g=w.g, letters=min(rotations(w)))


def minimal_period(letters: tuple[int, ...]) -> int:
    n = len(letters)
    for d in range(1, n + 1):
        if n % d == 0 and letters == letters[d:] + letters[:d]:
            return d
    return n


def conjugacy_class(w: Word) -> ConjugacyClass:
    cw = cyclic_reduce(w)
    if not cw.letters:
        raise ValueError("trivial word has no conjugacy class")
    rep = canonical_rotation(cw)
    return ConjugacyClass(representative=rep,
                          primitive=minimal_period(rep.letters) == len(rep.letters))


def enumerate_reduced(g: int, n: int) -> list[Word]:
    """All reduced words of length n; there are 2g(2g-1)^{n-1} of them."""
    if n < 1:
        raise ValueError("n >= 1 required")
    words: list[tuple[int, ...]] = [(i,) for i in range(2 * g)]
    for _ in range(n - 1):
        words = [w + (i,) for w in words for i in range(2 * g)
                 if i != inverse_letter(w[-1], g)]
    return [Word(g=g, letters=w) for w in words]


def enumerate_cyclically_reduced(g: int, n: int) -> list[Word]:
    out = []
    for w in enumerate_reduced(g, n):
        if n == 1 or w.letters[0] != inverse_letter(w.letters[-1], g):
            out.append(w)
    return out


def enumerate_classes(g: int, max_len: int, primitive_only: bool = False
                      ) -> list[ConjugacyClass]:
    """Conjugacy classes of cyclically reduced length <= max_len, rotation-deduped."""
    out: list[ConjugacyClass] = []
    for n in range(1, max_len + 1):
        seen: set[tuple[int, ...]] = set()
        for w in enumerate_cyclically_reduced(g, n):
            rep = min(rotations(w))
            if rep in seen:
                continue
            seen.add(rep)
            cls = ConjugacyClass(representative=Word(g=g, letters=rep),
                                 primitive=minimal_period(rep) == n)
            if cls.primitive or not primitive_only:
                out.append(cls)
    return out


def enumerate_primitive_classes(g: int, max_len: int) -> list[ConjugacyClass]:
    return enumerate_classes(g, max_len, primitive_only=True)


def format_word(w: Word) -> str:
    parts = []
    for i in w.letters:
        if i < w.g:
            parts.append(f"a{i + 1}")
        else:
            parts.append(f"A{i - w.g + 1}")
    return " ".join(parts)


def parse_word(g: int, text: str) -> Word:
    letters = []
    for tok in text.split():
        if len(tok) < 2 or tok[0] not in "aA" or not tok[1:].isdigit():
            raise ValueError(f"bad letter token {tok!r}")
        k = int(tok[1:])
        if not 1 <= k <= g:
            raise ValueError(f"letter index out of range in {tok!r}")
        letters.append(k - 1 if tok[0] == "a" else g + k - 1)
    return reduce(g, letters)

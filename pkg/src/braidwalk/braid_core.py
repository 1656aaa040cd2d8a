"""Garside normal forms for B3, B3/Z and the dihedral Artin groups A_k.

An element is stored as ``W * Delta**e`` where ``W`` is a positive word over
``{a, b}`` containing no alternating factor of length ``k`` (so ``W`` is not
divisible by Delta).  Such words are the unique positive representatives of
their class, which makes the pair ``(W, e)`` canonical.  ``W`` is cut into
syllables at every doubled letter; consecutive syllables then satisfy
``Last(x_i) == First(x_{i+1})``.

Right multiplication by a positive letter ``x`` appends ``tau^e(x)`` to ``W``
(``tau`` is conjugation by Delta: the letter swap for odd ``k``, trivial for
even ``k``); when the trailing alternating run reaches length ``k`` it is
removed and ``e`` is incremented.  Inverse letters are rewritten as
``x^-1 = tau(Y) Delta^-1`` with ``Y x = Delta``.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Iterable, NamedTuple, Sequence, Union

LETTERS = ("a", "b")
GENERATORS = ("a", "A", "b", "B")  # upper case = inverse
_SWAP = str.maketrans("abAB", "baBA")


class Family(str, enum.Enum):
    B3 = "B3"
    B3modZ = "B3modZ"
    Ak = "Ak"
    AkmodZ = "AkmodZ"


@dataclasses.dataclass(frozen=True)
class GroupContext:
    family: Family
    k: int = 3

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.k < 3:
            raise ValueError(f"k must be >= 3, got {self.k}")
        if self.family in (Family.B3, Family.B3modZ) and self.k != 3:
            raise ValueError("B3 families require k = 3")

    @property
    def twists(self) -> bool:
        """Whether conjugation by Delta swaps a and b (odd k)."""
        return self.k % 2 == 1

    @property
    def delta_modulus(self) -> int | None:
        """Modulus applied to the Delta exponent, or None for no reduction."""
        if self.family in (Family.B3, Family.Ak):
            return None
        return 2 if self.twists else 1

    @property
    def center_rule(self) -> str:
        return "Delta^2" if self.twists else "Delta"

    def reduce(self, e: int) -> int:
        m = self.delta_modulus
        return e if m is None else e % m

    def delta_word(self, start: str = "a") -> str:
        return alternating(start, self.k)


B3 = GroupContext(Family.B3)
B3_MOD_Z = GroupContext(Family.B3modZ)


def alternating(start: str, length: int) -> str:
    other = swap(start)
    return "".join(start if i % 2 == 0 else other for i in range(length))


def swap(word: str) -> str:
    """Letterwise a <-> b (and A <-> B)."""
    return word.translate(_SWAP)


def first(syllable: str) -> str:
    return syllable[0]


def last(syllable: str) -> str:
    return syllable[-1]


def is_alternating(word: str) -> bool:
    return len(word) > 0 and all(x != y for x, y in zip(word, word[1:]))


def syllables_of(letters: str) -> tuple[str, ...]:
    """Cut a positive word at doubled letters."""
    if not letters:
        return ()
    out, start = [], 0
    for i in range(1, len(letters)):
        if letters[i] == letters[i - 1]:
            out.append(letters[start:i])
            start = i
    out.append(letters[start:])
    return tuple(out)


class SigmaLetter(NamedTuple):
    """One of the letters ``u`` or ``u Delta`` with ``u`` a syllable."""

    syllable: str
    delta: bool = False

    def __str__(self):
        return self.syllable + ("D" if self.delta else "")


def sigma_alphabet(k: int = 3) -> list[SigmaLetter]:
    """T u T.Delta.  For k = 3 this is a, b, ab, ba, aD, bD, abD, baD."""
    sylls = [alternating(x, n) for n in range(1, k) for x in LETTERS]
    return [SigmaLetter(s, False) for s in sylls] + [SigmaLetter(s, True) for s in sylls]


SIGMA = sigma_alphabet(3)
T_ALPHABET = tuple(s.syllable for s in SIGMA[:4])  # a, b, ab, ba


@dataclasses.dataclass(frozen=True)
class GarsideNormalForm:
    context: GroupContext
    word: tuple[str, ...]
    delta_exp: int

    @property
    def letters(self) -> str:
        return "".join(self.word)

    @property
    def syllable_length(self) -> int:
        return len(self.word)

    @property
    def positive_length(self) -> int:
        return sum(map(len, self.word))

    def is_identity(self) -> bool:
        return not self.word and self.delta_exp == 0

    def __mul__(self, other: "GarsideNormalForm | SigmaLetter | str") -> "GarsideNormalForm":
        if isinstance(other, GarsideNormalForm):
            return multiply(self, other)
        if isinstance(other, SigmaLetter):
            return multiply_right(self, other)
        return _Builder.of(self).feed(other).freeze()

    def __str__(self):
        body = ".".join(self.word) or "1"
        return body if self.delta_exp == 0 else f"{body}.D^{self.delta_exp}"

    def key(self) -> tuple[str, int]:
        return self.letters, self.delta_exp


class _Builder:
    """Mutable working state used while rewriting; never escapes this module."""

    __slots__ = ("ctx", "letters", "runs", "e")

    def __init__(self, ctx: GroupContext, letters: str = "", e: int = 0):
        self.ctx = ctx
        self.letters: list[str] = []
        self.runs: list[int] = []
        self.e = e
        for x in letters:
            self._append(x)
        if self.runs and max(self.runs) >= ctx.k:
            raise AssertionError("letters contain Delta")

    @classmethod
    def of(cls, x: GarsideNormalForm) -> "_Builder":
        return cls(x.context, x.letters, x.delta_exp)

    def _append(self, x: str):
        if self.letters and self.letters[-1] != x:
            run = self.runs[-1] + 1
        else:
            run = 1
        self.letters.append(x)
        self.runs.append(run)

    def push(self, x: str):
        """Right-multiply by the positive letter x."""
        if self.ctx.twists and self.e % 2:
            x = "b" if x == "a" else "a"
        self._append(x)
        if self.runs[-1] == self.ctx.k:
            del self.letters[-self.ctx.k:]
            del self.runs[-self.ctx.k:]
            self.e += 1

    def push_inverse(self, x: str):
        """Right-multiply by x^-1 = tau(Y) Delta^-1 where Y x = Delta."""
        k = self.ctx.k
        y = "b" if x == "a" else "a"
        # alternating word of length k-1 ending in y
        tail = alternating(y if (k - 1) % 2 else x, k - 1)
        if self.ctx.twists:
            tail = swap(tail)
        for letter in tail:
            self.push(letter)
        self.e -= 1

    def feed(self, word: Iterable[str]) -> "_Builder":
        for g in word:
            if g in "ab":
                self.push(g)
            elif g in "AB":
                self.push_inverse(g.lower())
            elif g == "D":
                self.e += 1
            elif g == "d":
                self.e -= 1
            else:
                raise ValueError(f"unknown generator {g!r}")
        return self

    def freeze(self) -> GarsideNormalForm:
        letters = "".join(self.letters)
        return GarsideNormalForm(self.ctx, syllables_of(letters), self.ctx.reduce(self.e))


Word = Union[str, Sequence[str]]


def parse_word(word: Word) -> list[str]:
    """Accept 'aBa', ['a', 'a-1', 'b'] or ['a', 'A'] style words."""
    if isinstance(word, str):
        return [g for g in word if not g.isspace()]
    out = []
    for g in word:
        if g in ("a^-1", "a-1", "a⁻¹"):
            out.append("A")
        elif g in ("b^-1", "b-1", "b⁻¹"):
            out.append("B")
        else:
            out.append(g)
    return out


def identity(ctx: GroupContext = B3_MOD_Z) -> GarsideNormalForm:
    return GarsideNormalForm(ctx, (), 0)


def normal_form(word: Word, ctx: GroupContext = B3_MOD_Z) -> GarsideNormalForm:
    """Normal form of a product of generators.

    Letters: ``a``, ``b``, inverses ``A``, ``B``; ``D``/``d`` for Delta and its
    inverse are also accepted.
    """
    return _Builder(ctx).feed(parse_word(word)).freeze()


def from_sigma(letters: Iterable[SigmaLetter], ctx: GroupContext = B3_MOD_Z) -> GarsideNormalForm:
    b = _Builder(ctx)
    for s in letters:
        b.feed(s.syllable)
        if s.delta:
            b.e += 1
    return b.freeze()


def element(s: SigmaLetter | str, ctx: GroupContext = B3_MOD_Z) -> GarsideNormalForm:
    if isinstance(s, str):
        return normal_form(s, ctx)
    return from_sigma([s], ctx)


def multiply_right(x: GarsideNormalForm, s: SigmaLetter | str) -> GarsideNormalForm:
    b = _Builder.of(x)
    if isinstance(s, SigmaLetter):
        b.feed(s.syllable)
        if s.delta:
            b.e += 1
    else:
        b.feed(parse_word(s))
    return b.freeze()


def multiply(x: GarsideNormalForm, y: GarsideNormalForm) -> GarsideNormalForm:
    if x.context != y.context:
        raise ValueError("elements live in different groups")
    b = _Builder.of(x)
    b.feed(y.letters)
    b.e += y.delta_exp
    return b.freeze()


def inverse(x: GarsideNormalForm) -> GarsideNormalForm:
    b = _Builder(x.context, "", -x.delta_exp)
    b.feed(x.letters.upper()[::-1])
    return b.freeze()


def to_word(x: GarsideNormalForm) -> str:
    """A generator word (over a, A, b, B) representing x."""
    e = x.delta_exp
    delta = x.context.delta_word()
    tail = delta * e if e >= 0 else delta.upper()[::-1] * (-e)
    return x.letters + tail


def iota(x):
    """Swap a and b in a syllable, sigma letter or normal form."""
    if isinstance(x, str):
        return swap(x)
    if isinstance(x, SigmaLetter):
        return SigmaLetter(swap(x.syllable), x.delta)
    if isinstance(x, GarsideNormalForm):
        return GarsideNormalForm(x.context, tuple(swap(s) for s in x.word), x.delta_exp)
    raise TypeError(type(x))


def as_sigma(x: GarsideNormalForm) -> SigmaLetter | None:
    """The sigma letter equal to x, if x is a single syllable times Delta^0/1."""
    if len(x.word) != 1 or x.delta_exp not in (0, 1):
        return None
    return SigmaLetter(x.word[0], bool(x.delta_exp))


def sigma_of(x: GarsideNormalForm) -> SigmaLetter:
    s = as_sigma(x)
    if s is None:
        raise ValueError(f"{x} is not a letter of Sigma")
    return s


def sigma_word(x: GarsideNormalForm) -> list[SigmaLetter]:
    """Write x as v_1 ... v_k over Sigma (the Delta factor rides on v_k)."""
    if not x.word:
        raise ValueError("1 and Delta have no Sigma spelling")
    if x.delta_exp not in (0, 1):
        raise ValueError("Sigma spelling needs Delta exponent 0 or 1")
    out = [SigmaLetter(s) for s in x.word]
    out[-1] = SigmaLetter(out[-1].syllable, bool(x.delta_exp))
    return out


# Generators of B3/Z seen as Sigma letters: a^-1 = ba.Delta, b^-1 = ab.Delta.
GENERATOR_SIGMA = {
    "a": SigmaLetter("a"),
    "b": SigmaLetter("b"),
    "A": SigmaLetter("ba", True),
    "B": SigmaLetter("ab", True),
}


def geodesic_length(x: GarsideNormalForm) -> int:
    """Word length of x for the generators a, b and their inverses.

    The Schreier graph on {g, g.Delta} cosets is a tree of triangles with
    one triangle per syllable.  A path that reaches the coset of x along the
    short edges has length m (the syllable count) and Delta exponent
    ``-m2``; traversing one triangle the long way costs one extra step and
    shifts the exponent by +1 (length-2 syllable) or -1 (length-1 syllable);
    a full loop round any triangle costs 3 and shifts it by +-1.  The
    minimisation over these moves has the closed form below.
    """
    ctx = x.context
    if ctx.k != 3:
        raise NotImplementedError("geodesic length is implemented for B3 and B3/Z")
    m = len(x.word)
    m2 = sum(1 for s in x.word if len(s) == 2)
    m1 = m - m2
    if ctx.family is Family.B3modZ:
        if (m2 + x.delta_exp) % 2 == 0:
            return m
        return m + 1 if m else 3
    return m + _exponent_cost(x.delta_exp + m2, m1, m2)


def _exponent_cost(d: int, m1: int, m2: int) -> int:
    """Cheapest way to shift the Delta exponent by d: +-1 per long triangle
    (at most m2 upward, m1 downward) at cost 1, any further unit at cost 3."""
    if d >= 0:
        used = min(d, m2)
    else:
        used = min(-d, m1)
    return used + 3 * (abs(d) - used)


def validate(x: GarsideNormalForm) -> None:
    """Raise AssertionError if x breaks a normal-form invariant."""
    k = x.context.k
    for s in x.word:
        assert is_alternating(s), s
        assert 1 <= len(s) <= k - 1, s
    for s, t in zip(x.word, x.word[1:]):
        assert last(s) == first(t), (s, t)
    assert x.delta_exp == x.context.reduce(x.delta_exp)

"""Words in a free group.

A :class:`Word` is stored in run-length form: a tuple of ``(generator, exponent)``
pairs in which adjacent runs never share a generator and no exponent is zero.
Construction always canonicalizes, so every ``Word`` value is freely reduced.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

__all__ = [
    "Word",
    "WordSyntaxError",
    "UnknownGeneratorError",
    "is_generator_name",
    "parse_word",
    "free_reduce",
    "cyclic_reduce",
    "power_decompose",
    "exponent_vector",
    "commutator",
    "format_word",
]

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


def is_generator_name(name: str) -> bool:
    return bool(_IDENT.match(name))


class WordSyntaxError(ValueError):
    """Malformed word text; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class UnknownGeneratorError(ValueError):
    def __init__(self, name: str, position: int | None = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown generator {name!r}{where}")
        self.name = name
        self.position = position


def _canonical_runs(runs: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    stack: list[list] = []
    for gen, exp in runs:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return tuple((g, e) for g, e in stack)


class Word:
    """An element of a free group, freely reduced, in run-length form."""

    __slots__ = ("runs",)

    def __init__(self, runs: Iterable[tuple[str, int]] = ()):
        object.__setattr__(self, "runs", _canonical_runs(runs))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, name: str) -> "Word":
        return cls(((name, 1),))

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[str, int]]) -> "Word":
        return cls(letters)

    def letters(self) -> list[tuple[str, int]]:
        """Expand into single signed letters ``(gen, +1 | -1)``."""
        out = []
        for g, e in self.runs:
            s = 1 if e > 0 else -1
            out.extend([(g, s)] * abs(e))
        return out

    def generators(self) -> set[str]:
        return {g for g, _ in self.runs}

    def inverse(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.runs))

    def substitute(self, mapping: dict[str, "Word"]) -> "Word":
        """Replace each generator in ``mapping`` by its image word."""
        out: list[tuple[str, int]] = []
        for g, e in self.runs:
            image = mapping.get(g)
            if image is None:
                out.append((g, e))
                continue
            piece = image if e > 0 else image.inverse()
            for _ in range(abs(e)):
                out.extend(piece.runs)
        return Word(out)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.runs + other.runs)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self.runs:
            return Word()
        if len(self.runs) == 1:
            g, e = self.runs[0]
            return Word(((g, e * n),))
        return Word(self.runs * n)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.runs)

    def __bool__(self) -> bool:
        return bool(self.runs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.runs == other.runs

    def __hash__(self) -> int:
        return hash(self.runs)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


def commutator(a: Word, b: Word) -> Word:
    """``[a,b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


def free_reduce(w: Word | Iterable[tuple[str, int]]) -> Word:
    """Free reduction. Accepts a Word or any iterable of (generator, exponent) runs."""
    if isinstance(w, Word):
        return Word(w.runs)
    return Word(w)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""
    runs = [list(r) for r in w.runs]
    conj: list[tuple[str, int]] = []
    while len(runs) >= 2 and runs[0][0] == runs[-1][0] and (runs[0][1] > 0) != (runs[-1][1] > 0):
        g = runs[0][0]
        t = min(abs(runs[0][1]), abs(runs[-1][1]))
        s = 1 if runs[0][1] > 0 else -1
        conj.append((g, s * t))
        runs[0][1] -= s * t
        runs[-1][1] += s * t
        if runs[-1][1] == 0:
            runs.pop()
        if runs and runs[0][1] == 0:
            runs.pop(0)
    # a single run left over is cyclically reduced already
    return Word(tuple(r) for r in runs), Word(conj)


def _smallest_period(seq: Sequence) -> int:
    n = len(seq)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n


def power_decompose(w: Word) -> tuple[Word, int]:
    """Write ``w = root**n`` with ``n`` maximal, so ``root`` is not a proper power."""
    if not w.runs:
        raise ValueError("power_decompose of the empty word")
    if len(w.runs) == 1:
        g, e = w.runs[0]
        return Word(((g, 1 if e > 0 else -1),)), abs(e)
    letters = w.letters()
    p = _smallest_period(letters)
    return Word(letters[:p]), len(letters) // p


def exponent_vector(w: Word, alphabet: Sequence[str]) -> list[int]:
    index = {g: i for i, g in enumerate(alphabet)}
    vec = [0] * len(alphabet)
    for g, e in w.runs:
        if g not in index:
            raise UnknownGeneratorError(g)
        vec[index[g]] += e
    return vec


# -- text form ----------------------------------------------------------------


def _format_runs(runs: Sequence[tuple[str, int]]) -> list[str]:
    parts = []
    i = 0
    while i < len(runs):
        quad = runs[i:i + 4]
        if (
            len(quad) == 4
            and quad[0][1] == 1 and quad[1][1] == 1
            and quad[2] == (quad[0][0], -1) and quad[3] == (quad[1][0], -1)
        ):
            parts.append(f"[{quad[0][0]},{quad[1][0]}]")
            i += 4
            continue
        g, e = runs[i]
        parts.append(g if e == 1 else f"{g}^{e}")
        i += 1
    return parts


def format_word(w: Word) -> str:
    """Render in the parser's grammar; commutators and periodic words use sugar."""
    if not w.runs:
        return "1"
    if len(w.runs) > 1:
        root, n = power_decompose(w)
        if n > 1:
            return f"({' '.join(_format_runs(root.runs))})^{n}"
    return " ".join(_format_runs(w.runs))


class _Parser:
    def __init__(self, text: str, alphabet: Sequence[str]):
        if not alphabet:
            raise ValueError("alphabet must be nonempty")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet names must be unique")
        self.text = text
        self.alphabet = set(alphabet)
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        return WordSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> Word:
        w = self.word()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return w

    def word(self) -> Word:
        terms = [self.term()]
        while self.peek() and (self.peek().isalpha() or self.peek() in "(["):
            terms.append(self.term())
        out: list[tuple[str, int]] = []
        for t in terms:
            out.extend(t.runs)
        return Word(out)

    def term(self) -> Word:
        prefix, base = self.factor()
        if self.peek() == "^":
            self.pos += 1
            base = base ** self.signed_int()
        return prefix * base

    def signed_int(self) -> int:
        self.skip_ws()
        start = self.pos
        m = re.compile(r"[+-]?\s*\d+").match(self.text, self.pos)
        if not m:
            raise self.error("expected integer exponent", start)
        self.pos = m.end()
        return int(m.group().replace(" ", ""))

    def factor(self) -> tuple[Word, Word]:
        # returns (prefix, base): an identifier run like "xy" is the word x*y and
        # a following exponent binds to the last generator only
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            w = self.word()
            self.expect(")")
            return Word(), w
        if ch == "[":
            self.pos += 1
            a = self.word()
            self.expect(",")
            b = self.word()
            self.expect("]")
            return Word(), commutator(a, b)
        if ch and ch.isalpha():
            m = re.compile(r"[A-Za-z][A-Za-z0-9]*").match(self.text, self.pos)
            start = self.pos
            self.pos = m.end()
            names = self.segment(m.group(), start)
            return Word((n, 1) for n in names[:-1]), Word.gen(names[-1])
        raise self.error(f"unexpected {ch!r}" if ch else "unexpected end of input")

    def segment(self, ident: str, start: int) -> list[str]:
        if ident in self.alphabet:
            return [ident]
        memo: dict[int, list[str] | None] = {}

        def split(i: int):
            if i == len(ident):
                return []
            if i in memo:
                return memo[i]
            memo[i] = None
            for j in range(len(ident), i, -1):
                if ident[i:j] in self.alphabet:
                    rest = split(j)
                    if rest is not None:
                        memo[i] = [ident[i:j]] + rest
                        break
            return memo[i]

        names = split(0)
        if names is None:
            raise UnknownGeneratorError(ident, start)
        return names


def parse_word(text: str, alphabet: Sequence[str]) -> Word:
    """Parse ``text`` into a freely reduced word over ``alphabet``.

    Grammar (whitespace ignored)::

        word   := term+
        term   := factor ("^" signed-int)?
        factor := ident | "(" word ")" | "[" word "," word "]"

    An identifier that is not itself in the alphabet is split into a run of
    alphabet names (longest match first), so ``xy`` means ``x y`` over ``{x, y}``.
    The literal ``1`` denotes the identity.
    """
    if text.strip() == "1":
        if not alphabet:
            raise ValueError("alphabet must be nonempty")
        return Word()
    return _Parser(text, list(alphabet)).parse()

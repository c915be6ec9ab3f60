"""Abelianization, mod-p Betti numbers and Kunneth profiles of product families."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

from .presentations import Family, Presentation
from .words import exponent_vector

__all__ = [
    "IntegerMatrix",
    "SmithForm",
    "BettiProfile",
    "PoincarePolynomial",
    "UnsupportedFactorError",
    "relation_matrix",
    "smith_normal_form",
    "abelianization",
    "rank_mod_p",
    "betti_mod_p_complex",
    "factor_poincare",
    "kunneth_betti",
    "morse_upper_bound",
]


class UnsupportedFactorError(ValueError):
    pass


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if len(entries) != self.rows or any(len(row) != self.cols for row in entries):
            raise ValueError("matrix dimensions do not match entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(tuple(r) for r in rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.factors} break the divisibility chain")

    @property
    def rank(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class BettiProfile:
    """Betti numbers b0, b1, b2 over a field of the given characteristic.

    ``source`` is ``"group"`` when the numbers are those of the group itself and
    ``"complex"`` when they come from a presentation 2-complex. Only group
    profiles bound the deficiency from above.
    """

    characteristic: int
    b0: int
    b1: int
    b2: int
    source: str = "group"

    def as_dict(self) -> dict:
        return {"char": self.characteristic, "b0": self.b0, "b1": self.b1, "b2": self.b2,
                "source": self.source}


@dataclass(frozen=True)
class PoincarePolynomial:
    """Coefficients ``(dim H^0, dim H^1, ...)`` truncated at ``degree``."""

    coefficients: tuple[int, ...]
    degree: int = 2

    def __post_init__(self):
        coeffs = tuple(self.coefficients[: self.degree + 1])
        coeffs += (0,) * (self.degree + 1 - len(coeffs))
        if any(c < 0 for c in coeffs):
            raise ValueError("Poincare coefficients must be nonnegative")
        object.__setattr__(self, "coefficients", coeffs)

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        deg = min(self.degree, other.degree)
        out = [0] * (deg + 1)
        for i, a in enumerate(self.coefficients[: deg + 1]):
            for j, b in enumerate(other.coefficients[: deg + 1 - i]):
                out[i + j] += a * b
        return PoincarePolynomial(tuple(out), deg)


def relation_matrix(p: Presentation) -> IntegerMatrix:
    rows = [exponent_vector(r, p.generators) for r in p.relators]
    return IntegerMatrix(len(rows), p.num_generators, tuple(tuple(r) for r in rows))


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """Invariant factors of an integer matrix.

    Pivots on the smallest nonzero absolute value in the remaining block (ties
    broken in row-major order), clearing its row and column by division with
    remainder until the pivot divides everything left.
    """
    a = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    factors = []
    t = 0
    while t < min(nr, nc):
        pivot = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]

        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                q = a[i][t] // p
                if q:
                    ai, at = a[i], a[t]
                    for j in range(t, nc):
                        ai[j] -= q * at[j]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, nc):
                q = a[t][j] // p
                if q:
                    for i in range(t, nr):
                        a[i][j] -= q * a[i][t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                bad = next(
                    ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                # pull the offending row into the pivot row; the next pass shrinks the pivot
                bi = bad[0]
                for j in range(t, nc):
                    a[t][j] += a[bi][j]
            # re-select the smallest entry in row t / column t as pivot
            best = (t, t)
            for i in range(t, nr):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, nc):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            if best != (t, t):
                i, j = best
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
        factors.append(abs(a[t][t]))
        t += 1
    return SmithForm(tuple(factors))


def abelianization(p: Presentation) -> tuple[int, list[int]]:
    """Return ``(b1, torsion)`` of the abelianized group."""
    snf = smith_normal_form(relation_matrix(p))
    return p.num_generators - snf.rank, [d for d in snf.factors if d > 1]


def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    if p == 0:
        return smith_normal_form(m).rank
    a = [[x % p for x in row] for row in m.entries]
    rank = 0
    for col in range(m.cols):
        piv = next((i for i in range(rank, m.rows) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(m.rows):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def betti_mod_p_complex(p: Presentation, char: int) -> BettiProfile:
    """Betti numbers of the presentation 2-complex over GF(char) (or Q for char 0)."""
    if char != 0 and not _is_prime(char):
        raise ValueError(f"characteristic must be 0 or prime, got {char}")
    r = rank_mod_p(relation_matrix(p), char)
    return BettiProfile(char, 1, p.num_generators - r, p.num_relators - r, source="complex")


def factor_poincare(f: Family, char: int) -> PoincarePolynomial:
    """Truncated Poincare polynomial of one family factor's group cohomology."""
    if f.kind == "surface":
        return PoincarePolynomial((1, 2 * f.param, 1))
    if f.kind == "orbifold":
        sig = f.param
        if char != 0 and sig.k > 0:
            raise UnsupportedFactorError(
                f"mod-{char} cohomology of {sig} is not available in closed form"
            )
        return PoincarePolynomial((1, 2 * sig.genus, 1))
    if f.kind == "free_abelian":
        k = f.param
        return PoincarePolynomial((1, k, comb(k, 2)))
    if f.kind == "cyclic":
        n = f.param
        if char != 0 and n % char == 0:
            return PoincarePolynomial((1, 1, 1))
        return PoincarePolynomial((1, 0, 0))
    return PoincarePolynomial((1, f.param, 0))


def kunneth_betti(factors: Sequence[Family], char: int) -> BettiProfile:
    """Group Betti numbers of the direct product of ``factors`` over a field of ``char``."""
    if char != 0 and not _is_prime(char):
        raise ValueError(f"characteristic must be 0 or prime, got {char}")
    poly = PoincarePolynomial((1,))
    for f in factors:
        poly = poly * factor_poincare(f, char)
    b0, b1, b2 = poly.coefficients
    return BettiProfile(char, b0, b1, b2, source="group")


def morse_upper_bound(profile: BettiProfile) -> int:
    """``b1 - b2``, an upper bound on the deficiency of the group."""
    if profile.source != "group":
        raise ValueError("a presentation-complex profile does not bound the group deficiency")
    return profile.b1 - profile.b2

"""Finite presentations and the standard families built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import (
    Word,
    WordSyntaxError,
    commutator,
    format_word,
    is_generator_name,
    parse_word,
)

__all__ = [
    "Presentation",
    "OrbifoldSignature",
    "Family",
    "orbifold_presentation",
    "one_relator_orbifold",
    "surface_presentation",
    "eliminate_generator",
    "product_presentation",
    "cyclic_presentation",
    "free_abelian_presentation",
    "free_presentation",
    "family_presentation",
    "deficiency_lower_bound",
    "euler_char_complex",
    "min_generators_orbifold",
    "parse_presentation",
    "format_presentation",
    "rename_generators",
]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generator names in {self.generators}")
        for g in self.generators:
            if not is_generator_name(g):
                raise ValueError(f"invalid generator name {g!r}")
        gens = set(self.generators)
        for r in self.relators:
            if not isinstance(r, Word):
                raise TypeError(f"relator {r!r} is not a Word")
            if not r:
                raise ValueError("relators must be nonempty")
            extra = r.generators() - gens
            if extra:
                raise ValueError(f"relator {r} uses generators outside the alphabet: {sorted(extra)}")

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def __str__(self) -> str:
        return format_presentation(self)


@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))
        if self.genus < 1:
            raise ValueError(f"orbifold genus must be >= 1, got {self.genus}")
        if any(m < 2 for m in self.multiplicities):
            raise ValueError(f"multiplicities must all be >= 2, got {self.multiplicities}")

    @property
    def k(self) -> int:
        return len(self.multiplicities)

    def __str__(self) -> str:
        mults = ",".join(map(str, self.multiplicities))
        return f"orbifold(g={self.genus}; {mults})" if mults else f"surface(g={self.genus})"


@dataclass(frozen=True)
class Family:
    """Descriptor for one factor of a closed-form family.

    ``kind`` is one of ``surface`` (param: genus), ``orbifold`` (param: signature),
    ``free_abelian`` (rank), ``cyclic`` (order) or ``free`` (rank).
    """

    kind: str
    param: object

    KINDS = ("surface", "orbifold", "free_abelian", "cyclic", "free")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "orbifold":
            if not isinstance(self.param, OrbifoldSignature):
                raise TypeError("orbifold family needs an OrbifoldSignature")
        elif not isinstance(self.param, int):
            raise TypeError(f"{self.kind} family needs an integer parameter")

    @classmethod
    def surface(cls, g: int) -> "Family":
        return cls("surface", g)

    @classmethod
    def orbifold(cls, sig: OrbifoldSignature) -> "Family":
        return cls("orbifold", sig)

    @classmethod
    def free_abelian(cls, k: int) -> "Family":
        return cls("free_abelian", k)

    @classmethod
    def cyclic(cls, p: int) -> "Family":
        return cls("cyclic", p)

    @classmethod
    def free(cls, n: int) -> "Family":
        return cls("free", n)

    @property
    def is_infinite(self) -> bool:
        if self.kind == "cyclic":
            return False
        if self.kind in ("free", "free_abelian"):
            return self.param >= 1
        return True

    def presentation(self) -> Presentation:
        if self.kind == "surface":
            return surface_presentation(self.param)
        if self.kind == "orbifold":
            return orbifold_presentation(self.param)
        if self.kind == "free_abelian":
            return free_abelian_presentation(self.param)
        if self.kind == "cyclic":
            return cyclic_presentation(self.param)
        return free_presentation(self.param)

    def __str__(self) -> str:
        if self.kind == "orbifold":
            sig = self.param
            return f"orbifold:{sig.genus}:" + ",".join(map(str, sig.multiplicities))
        return f"{self.kind}:{self.param}"

    @classmethod
    def parse(cls, text: str) -> "Family":
        """Parse ``surface:2``, ``orbifold:2:2,5``, ``free_abelian:4``, ``cyclic:3``, ``free:2``."""
        parts = text.strip().split(":")
        kind = parts[0].strip()
        try:
            if kind == "orbifold":
                if len(parts) not in (2, 3):
                    raise ValueError
                mults = parts[2] if len(parts) == 3 else ""
                sig = OrbifoldSignature(
                    int(parts[1]), tuple(int(m) for m in mults.split(",") if m.strip())
                )
                return cls.orbifold(sig)
            if len(parts) != 2:
                raise ValueError
            return cls(kind, int(parts[1]))
        except (ValueError, TypeError) as exc:
            raise ValueError(f"bad family descriptor {text!r}: {exc}") from None


# -- constructors ----------------------------------------------------------------


def _surface_word(g: int) -> Word:
    w = Word()
    for i in range(1, g + 1):
        w = w * commutator(Word.gen(f"x{i}"), Word.gen(f"y{i}"))
    return w


def _surface_gens(g: int) -> list[str]:
    gens = []
    for i in range(1, g + 1):
        gens += [f"x{i}", f"y{i}"]
    return gens


def orbifold_presentation(sig: OrbifoldSignature) -> Presentation:
    """``<x1,y1,..,xg,yg,z1,..,zk | [x1,y1]..[xg,yg] z1..zk, z1^m1, .., zk^mk>``."""
    if sig.genus < 1:
        raise ValueError("genus must be >= 1")
    zs = [f"z{i}" for i in range(1, sig.k + 1)]
    long_rel = _surface_word(sig.genus) * Word((z, 1) for z in zs)
    rels = [long_rel] + [Word(((z, m),)) for z, m in zip(zs, sig.multiplicities)]
    return Presentation(tuple(_surface_gens(sig.genus) + zs), tuple(rels), label=str(sig))


def surface_presentation(g: int) -> Presentation:
    return orbifold_presentation(OrbifoldSignature(g))


def one_relator_orbifold(g: int, m: int) -> Presentation:
    """``<x1,y1,..,xg,yg | ([x1,y1]..[xg,yg])^m>``."""
    if g < 1 or m < 1:
        raise ValueError(f"need g >= 1 and m >= 1, got g={g}, m={m}")
    return Presentation(tuple(_surface_gens(g)), (_surface_word(g) ** m,),
                        label=f"one-relator(g={g}, m={m})")


def cyclic_presentation(p: int, name: str = "z") -> Presentation:
    if p < 2:
        raise ValueError(f"cyclic order must be >= 2, got {p}")
    return Presentation((name,), (Word(((name, p),)),), label=f"Z_{p}")


def free_abelian_presentation(k: int, prefix: str = "a") -> Presentation:
    if k < 1:
        raise ValueError(f"rank must be >= 1, got {k}")
    gens = [f"{prefix}{i}" for i in range(1, k + 1)]
    rels = [commutator(Word.gen(gens[i]), Word.gen(gens[j]))
            for i in range(k) for j in range(i + 1, k)]
    return Presentation(tuple(gens), tuple(rels), label=f"Z^{k}")


def free_presentation(n: int, prefix: str = "a") -> Presentation:
    if n < 0:
        raise ValueError(f"rank must be >= 0, got {n}")
    return Presentation(tuple(f"{prefix}{i}" for i in range(1, n + 1)), (), label=f"F_{n}")


def rename_generators(p: Presentation, mapping: dict[str, str]) -> Presentation:
    gens = tuple(mapping.get(g, g) for g in p.generators)
    subst = {old: Word.gen(new) for old, new in mapping.items()}
    return Presentation(gens, tuple(r.substitute(subst) for r in p.relators), label=p.label)


def _fresh(name: str, taken: set[str]) -> str:
    i = 1
    while f"{name}q{i}" in taken:
        i += 1
    return f"{name}q{i}"


def product_presentation(p: Presentation, q: Presentation) -> Presentation:
    """Direct product: both relator sets plus every commutator between the factors."""
    taken = set(p.generators) | set(q.generators)
    mapping = {}
    for g in q.generators:
        if g in p.generators:
            new = _fresh(g, taken)
            taken.add(new)
            mapping[g] = new
    if mapping:
        q = rename_generators(q, mapping)
    rels = list(p.relators) + list(q.relators)
    rels += [commutator(Word.gen(a), Word.gen(b)) for a in p.generators for b in q.generators]
    label = None
    if p.label and q.label:
        label = f"{p.label} x {q.label}"
    return Presentation(p.generators + q.generators, tuple(rels), label=label)


def family_presentation(factors: Sequence[Family]) -> Presentation:
    """Obvious presentation of the direct product of ``factors`` (left to right)."""
    if not factors:
        return free_presentation(0)
    pres = factors[0].presentation()
    for f in factors[1:]:
        pres = product_presentation(pres, f.presentation())
    return pres


def eliminate_generator(p: Presentation, relator_index: int, generator: str) -> Presentation:
    """Tietze move: solve relator ``relator_index`` for ``generator`` and substitute.

    The generator must occur in that relator exactly once, with exponent +1 or -1.
    Relators that become trivial after substitution are dropped.
    """
    if generator not in p.generators:
        raise ValueError(f"{generator!r} is not a generator")
    r = p.relators[relator_index]
    positions = [i for i, (g, _) in enumerate(r.runs) if g == generator]
    if len(positions) != 1 or abs(r.runs[positions[0]][1]) != 1:
        raise ValueError(
            f"{generator!r} does not occur exactly once with unit exponent in relator {r}"
        )
    i = positions[0]
    u, v = Word(r.runs[:i]), Word(r.runs[i + 1:])
    # u g v = 1  =>  g = u^-1 v^-1 ;  u g^-1 v = 1  =>  g = v u
    image = (u.inverse() * v.inverse()) if r.runs[i][1] == 1 else (v * u)
    rels = []
    for j, rel in enumerate(p.relators):
        if j == relator_index:
            continue
        new = rel.substitute({generator: image})
        if new:
            rels.append(new)
    gens = tuple(g for g in p.generators if g != generator)
    return Presentation(gens, tuple(rels), label=p.label)


# -- counts ----------------------------------------------------------------------


def deficiency_lower_bound(p: Presentation) -> int:
    return p.num_generators - p.num_relators


def euler_char_complex(p: Presentation) -> int:
    """Euler characteristic of the presentation 2-complex."""
    return 1 - p.num_generators + p.num_relators


def min_generators_orbifold(sig: OrbifoldSignature) -> int:
    # taken as known for this family, not verified
    return 2 * sig.genus + sig.k - 1 if sig.k > 0 else 2 * sig.genus


# -- text format -----------------------------------------------------------------


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_gens(text: str) -> tuple[str, ...]:
    names = [g.strip() for g in text.split(",")] if text.strip() else []
    for g in names:
        if not is_generator_name(g):
            raise WordSyntaxError(f"invalid generator name {g!r}", text, max(text.find(g), 0))
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names in {text!r}")
    return tuple(names)


def _parse_relator(text: str, gens: Sequence[str]) -> Word | None:
    if not gens:
        if text.strip() in ("", "1"):
            return None
        raise WordSyntaxError("relator in a presentation with no generators", text, 0)
    w = parse_word(text, gens)
    return w if w else None


def parse_presentation(text: str, label: str | None = None) -> Presentation:
    """Parse either the file form (``gens:`` line, then ``rel:`` lines) or ``< gens | rels >``.

    Relators that reduce to the identity are dropped.
    """
    stripped = text.strip()
    if stripped.startswith("<"):
        if not stripped.endswith(">"):
            raise WordSyntaxError("missing closing '>'", text, len(text))
        body = stripped[1:-1]
        if "|" not in body:
            raise WordSyntaxError("missing '|'", text, 0)
        gens_text, rels_text = body.split("|", 1)
        gens = _parse_gens(gens_text)
        rels = []
        if rels_text.strip():
            for piece in _split_top_level(rels_text):
                w = _parse_relator(piece, gens)
                if w is not None:
                    rels.append(w)
        return Presentation(gens, tuple(rels), label=label)

    gens = None
    rels = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key = key.strip().lower()
        if key == "gens" and gens is None:
            gens = _parse_gens(value)
        elif key == "rel" and gens is not None:
            w = _parse_relator(value, gens)
            if w is not None:
                rels.append(w)
        else:
            raise WordSyntaxError(f"unexpected line {lineno}: {line!r}", text, 0)
    if gens is None:
        raise WordSyntaxError("missing 'gens:' line", text, 0)
    return Presentation(gens, tuple(rels), label=label)


def format_presentation(p: Presentation, style: str = "inline") -> str:
    if style == "file":
        lines = ["gens: " + ", ".join(p.generators)]
        lines += [f"rel: {format_word(r)}" for r in p.relators]
        return "\n".join(lines) + "\n"
    gens = ", ".join(p.generators)
    rels = ", ".join(format_word(r) for r in p.relators)
    left = f"< {gens} |" if gens else "< |"
    return f"{left} {rels} >" if rels else f"{left} >"


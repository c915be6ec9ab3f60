"""Kähler-group verdicts from presentations plus user-asserted facts.

Recognition is syntactic: a presentation is matched against the orbifold and
one-relator normal forms up to generator renaming, relator order, cyclic
permutation and inversion of relators. Failing to match proves nothing, so
rules that would need an isomorphism test fall through to ``Unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .homology import (
    UnsupportedFactorError,
    abelianization,
    kunneth_betti,
    morse_upper_bound,
)
from .presentations import (
    Family,
    OrbifoldSignature,
    Presentation,
    deficiency_lower_bound,
    family_presentation,
)
from .words import Word, cyclic_reduce, power_decompose

__all__ = [
    "InconsistentFactsError",
    "GroupFacts",
    "Verdict",
    "RuleHit",
    "TableRow",
    "KAHLER",
    "NOT_KAHLER",
    "KAHLER_IFF_SURFACE",
    "UNKNOWN",
    "OPEN_DEFICIENCIES",
    "recognize_orbifold_form",
    "match_normal_form",
    "effective_family",
    "deficiency_interval",
    "multiple_fiber_bound",
    "classify",
    "deficiency_table",
    "cyclic_cube_row",
]

KAHLER = "Kähler"
NOT_KAHLER = "NotKähler"
KAHLER_IFF_SURFACE = "KählerIffSurfaceForm"
UNKNOWN = "Unknown"

# negative values not realized by any family below
OPEN_DEFICIENCIES = (-5, -7)

CITATIONS = {
    "R1": "Theorem (master): a group of deficiency >= 2 is Kähler iff it is isomorphic "
          "to an orbifold fundamental group of genus >= 2",
    "R1'": "Theorem (one-relator): an infinite one-relator group is Kähler iff it is an "
           "orbifold group of genus >= 1 with at most one multiple point",
    "R2": "Corollary: no Kähler group has positive even deficiency",
    "R3": "Theorem (limit) + Theorem (master): a non-Abelian limit group is Kähler iff it "
          "is a surface group of genus >= 2",
    "R4": "Theorem (limit): a non-Abelian limit group is Kähler iff it is a surface group "
          "of genus >= 2",
}


class InconsistentFactsError(ValueError):
    """User-supplied facts contradict each other or the presentation."""


@dataclass(frozen=True)
class GroupFacts:
    """A presentation with tri-state assertions (``None`` = unknown).

    ``family`` optionally tags the group as a direct product of closed-form
    families; it must describe the same presentation up to renaming.
    """

    presentation: Presentation
    is_infinite: bool | None = None
    is_limit_group: bool | None = None
    is_abelian: bool | None = None
    family: tuple[Family, ...] | None = None
    provenance: str | None = None

    def __post_init__(self):
        if self.family is not None:
            object.__setattr__(self, "family", tuple(self.family))


class RuleHit(NamedTuple):
    id: str
    citation: str


@dataclass(frozen=True)
class Verdict:
    status: str
    justification: tuple[RuleHit, ...]
    interval: tuple[int, int | None]
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.status != UNKNOWN and not self.justification:
            raise ValueError("a decisive verdict needs at least one justification")

    def as_json(self) -> dict:
        lower, upper = self.interval
        return {
            "status": self.status,
            "rules": [{"id": h.id, "citation": h.citation} for h in self.justification],
            "interval": {"lower": lower, "upper": upper},
            "notes": list(self.notes),
        }


# -- recognition -----------------------------------------------------------------


def _commutator_block(letters: list[tuple[str, int]], gens: set[str]) -> int | None:
    """Genus g if ``letters`` is [a1,b1]...[ag,bg] using each of ``gens`` exactly once."""
    if len(letters) % 4 or len(letters) != 2 * len(gens) or not letters:
        return None
    seen = set()
    for i in range(0, len(letters), 4):
        (a, ea), (b, eb), (a2, ea2), (b2, eb2) = letters[i:i + 4]
        if not (ea == eb == 1 and ea2 == eb2 == -1 and a2 == a and b2 == b and a != b):
            return None
        seen.update((a, b))
    if seen != gens or len(seen) != len(letters) // 2:
        return None
    return len(letters) // 4


def _rotations(w: Word):
    core, _ = cyclic_reduce(w)
    for oriented in (core, core.inverse()):
        letters = oriented.letters()
        for i in range(len(letters)):
            yield letters[i:] + letters[:i]


def match_normal_form(p: Presentation) -> tuple[OrbifoldSignature, str] | None:
    """Match ``p`` against the normal forms; returns ``(signature, form)``.

    ``form`` is ``"one-relator"`` for a single relator ``([x1,y1]...[xg,yg])^m``
    (this includes surface groups) and ``"orbifold"`` for the multi-relator
    form with k >= 1 cone generators.
    """
    gens = set(p.generators)
    if p.num_relators == 1:
        core, _ = cyclic_reduce(p.relators[0])
        root, n = power_decompose(core)
        for letters in _rotations(root):
            g = _commutator_block(letters, gens)
            if g is not None:
                return OrbifoldSignature(g, (n,) if n > 1 else ()), "one-relator"
        return None

    powers: dict[str, int] = {}
    long = []
    for r in p.relators:
        if len(r.runs) == 1 and abs(r.runs[0][1]) >= 2 and r.runs[0][0] not in powers:
            powers[r.runs[0][0]] = abs(r.runs[0][1])
        else:
            long.append(r)
    if len(long) != 1 or not powers:
        return None
    k = len(powers)
    surface_gens = gens - set(powers)
    for letters in _rotations(long[0]):
        tail = letters[len(letters) - k:]
        if [e for _, e in tail] != [1] * k or {z for z, _ in tail} != set(powers):
            continue
        g = _commutator_block(letters[: len(letters) - k], surface_gens)
        if g is not None and g >= 1:
            return OrbifoldSignature(g, tuple(powers[z] for z, _ in tail)), "orbifold"
    return None


def recognize_orbifold_form(p: Presentation) -> OrbifoldSignature | None:
    """Signature of ``p`` if it is an orbifold or one-relator normal form, else ``None``."""
    match = match_normal_form(p)
    return match[0] if match else None


# -- deficiency interval ------------------------------------------------------------


def _characteristics(factors: Sequence[Family]) -> list[int]:
    chars = {0}
    for f in factors:
        if f.kind == "cyclic":
            n = f.param
            d = 2
            while d * d <= n:
                while n % d == 0:
                    chars.add(d)
                    n //= d
                d += 1
            if n > 1:
                chars.add(n)
    return sorted(chars)


def _family_upper(factors: Sequence[Family]) -> int | None:
    bounds = []
    for char in _characteristics(factors):
        try:
            bounds.append(morse_upper_bound(kunneth_betti(factors, char)))
        except UnsupportedFactorError:
            continue
    return min(bounds) if bounds else None


def _check_family(p: Presentation, factors: Sequence[Family]):
    tagged = family_presentation(factors)
    same = (
        tagged.num_generators == p.num_generators
        and tagged.num_relators == p.num_relators
        and abelianization(tagged) == abelianization(p)
    )
    if not same:
        raise InconsistentFactsError(
            f"family tag {' x '.join(map(str, factors))} does not match the presentation"
        )


def effective_family(facts: GroupFacts) -> tuple[tuple[Family, ...] | None, str | None]:
    p = facts.presentation
    if facts.family is not None:
        _check_family(p, facts.family)
        return facts.family, facts.provenance or "user tag"
    if p.num_relators == 0:
        return (Family.free(p.num_generators),), "no relators: free group"
    sig = recognize_orbifold_form(p)
    if sig is not None:
        fam = Family.surface(sig.genus) if sig.k == 0 else Family.orbifold(sig)
        return (fam,), "recognized normal form"
    return None, None


def deficiency_interval(facts: GroupFacts) -> tuple[int, int | None]:
    """``(lower, upper)``: the presentation's count and, when a family is known, its Morse bound."""
    lower = deficiency_lower_bound(facts.presentation)
    factors, _ = effective_family(facts)
    upper = _family_upper(factors) if factors else None
    if upper is not None and upper < lower:
        raise InconsistentFactsError(f"upper bound {upper} below lower bound {lower}")
    return lower, upper


def multiple_fiber_bound(a: int, b1: int, b: int) -> int:
    """``a - b1 + 1``, the bound on the number of multiple fibers; must not exceed ``b``."""
    if a < b1:
        raise InconsistentFactsError(f"a = {a} generators cannot carry b1 = {b1}")
    bound = a - b1 + 1
    if bound > b:
        raise InconsistentFactsError(f"a - b1 + 1 = {bound} exceeds the relator count b = {b}")
    return bound


# -- rules ---------------------------------------------------------------------------


def classify(facts: GroupFacts) -> Verdict:
    """Apply rules R1, R1', R2, R3, R4 in priority order.

    The status comes from the first rule that fires; every rule that fires is
    listed. Contradictory decisive rules raise :class:`InconsistentFactsError`.
    """
    p = facts.presentation
    notes = []
    b1, _ = abelianization(p)
    infinite = facts.is_infinite
    if b1 > 0:
        if infinite is False:
            raise InconsistentFactsError("b1 > 0 but the group is asserted finite")
        if infinite is None:
            infinite = True
            notes.append("is_infinite inferred from b1 > 0")
    _, provenance = effective_family(facts)
    lower, upper = deficiency_interval(facts)
    match = match_normal_form(p)
    sig, form = match if match else (None, None)
    surface_form = sig is not None and sig.k == 0
    free_form = p.num_relators == 0
    abelian, limit = facts.is_abelian, facts.is_limit_group
    if free_form and p.num_generators >= 2:
        # free groups of rank >= 2 are non-Abelian limit groups
        if abelian is True or limit is False:
            raise InconsistentFactsError("a free group of rank >= 2 is a non-Abelian limit group")
        if abelian is None:
            abelian = False
            notes.append("is_abelian inferred from free presentation of rank >= 2")
        if limit is None:
            limit = True
            notes.append("is_limit_group inferred from free presentation")
    nonabelian_limit = limit is True and abelian is False

    hits: list[tuple[str, str]] = []
    if sig is not None and sig.genus >= 2:
        hits.append(("R1", KAHLER))
        if sig.k >= 2:
            notes.append(f"k = {sig.k} multiple points; k equals the minimal number of "
                         f"relations in any finite presentation")
    if form == "one-relator" and infinite is True:
        hits.append(("R1'", KAHLER))
    if upper is not None and upper == lower and lower >= 2 and lower % 2 == 0:
        hits.append(("R2", NOT_KAHLER))
    if lower >= 2 and sig is None and nonabelian_limit and not surface_form and not free_form:
        hits.append(("R3", NOT_KAHLER))
    if nonabelian_limit:
        if sig is not None and not (surface_form and sig.genus >= 2):
            raise InconsistentFactsError(
                f"normal form {sig} is not a non-Abelian limit group"
            )
        if surface_form:
            hits.append(("R4", KAHLER))
        elif free_form and p.num_generators >= 2:
            hits.append(("R4", NOT_KAHLER))

    statuses = {s for _, s in hits}
    if len(statuses) > 1:
        raise InconsistentFactsError(
            "rules disagree: " + ", ".join(f"{r} -> {s}" for r, s in hits)
        )
    if hits:
        status = hits[0][1]
    elif nonabelian_limit:
        status = KAHLER_IFF_SURFACE
        hits.append(("R4", KAHLER_IFF_SURFACE))
    else:
        status = UNKNOWN
    if provenance and upper is not None:
        notes.append(f"upper bound from closed-form family ({provenance})")
    justification = tuple(RuleHit(r, CITATIONS[r]) for r, _ in hits)
    return Verdict(status, justification, (lower, upper), tuple(notes))


# -- negative deficiencies -------------------------------------------------------------


class TableRow(NamedTuple):
    label: str
    lower: int
    upper: int | None
    characteristic: int


def _row(label: str, factors: Sequence[Family], char: int) -> TableRow:
    lower = deficiency_lower_bound(family_presentation(factors))
    upper = morse_upper_bound(kunneth_betti(factors, char))
    return TableRow(label, lower, upper, char)


def deficiency_table(g: int, p: int) -> list[TableRow]:
    """Five surface-times-abelian products whose deficiency is pinned down exactly."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    S = Family.surface(g)
    Z2, Z4 = Family.free_abelian(2), Family.free_abelian(4)
    C = Family.cyclic(p)
    surf = f"pi1(S_{g})"
    return [
        _row(f"{surf} x Z^2", [S, Z2], 0),
        _row(f"{surf} x Z_{p}", [S, C], p),
        _row(f"{surf} x Z^4", [S, Z4], 0),
        _row(f"{surf} x Z^2 x (Z_{p})^2", [S, Z2, C, C], p),
        _row(f"{surf} x (Z_{p})^4", [S, C, C, C, C], p),
    ]


def cyclic_cube_row(p: int) -> TableRow:
    C = Family.cyclic(p)
    return _row(f"(Z_{p})^3", [C, C, C], p)

"""Coset enumeration, low-index subgroups and Reidemeister-Schreier rewriting.

Cosets are 0-based internally (coset 0 is the subgroup itself); serialized
tables use 1-based images. Columns of a working table are ordered
``x1, x1^-1, x2, x2^-1, ...`` following the presentation's generator order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .presentations import Presentation
from .words import Word

__all__ = [
    "CosetTable",
    "RewrittenPresentation",
    "CosetOverflowError",
    "BudgetExceededError",
    "IncompleteTableError",
    "coset_enumerate",
    "low_index_subgroups",
    "reidemeister_schreier",
    "rs_counts",
    "DEFAULT_MAX_COSETS",
]

DEFAULT_MAX_COSETS = 10_000


class CosetOverflowError(RuntimeError):
    """Enumeration needed more live cosets than allowed (infinite index or too small a budget)."""


class BudgetExceededError(RuntimeError):
    pass


class IncompleteTableError(ValueError):
    pass


def _columns(p: Presentation, w: Word) -> list[int]:
    index = {g: i for i, g in enumerate(p.generators)}
    cols = []
    for g, e in w.runs:
        if g not in index:
            raise ValueError(f"word {w} uses {g!r}, which is not a generator of the presentation")
        c = 2 * index[g] + (0 if e > 0 else 1)
        cols.extend([c] * abs(e))
    return cols


@dataclass(frozen=True)
class CosetTable:
    """Complete, standardized action of the generators on the cosets of a subgroup.

    ``images[i][c]`` is the coset reached from coset ``c`` by generator ``i``.
    """

    presentation: Presentation
    subgroup_generators: tuple[Word, ...]
    images: tuple[tuple[int, ...], ...]
    _inverse: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "subgroup_generators", tuple(self.subgroup_generators))
        images = tuple(tuple(col) for col in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.presentation.num_generators:
            raise IncompleteTableError("one image array per generator is required")
        d = len(images[0]) if images else 1
        inverse = []
        for col in images:
            if len(col) != d or sorted(col) != list(range(d)):
                raise IncompleteTableError(f"generator column {col} is not a permutation of {d} cosets")
            inv = [0] * d
            for c, im in enumerate(col):
                inv[im] = c
            inverse.append(tuple(inv))
        object.__setattr__(self, "_inverse", tuple(inverse))

    @property
    def index(self) -> int:
        return len(self.images[0]) if self.images else 1

    def act(self, coset: int, w: Word) -> int:
        gens = {g: i for i, g in enumerate(self.presentation.generators)}
        for g, e in w.runs:
            col = self.images[gens[g]] if e > 0 else self._inverse[gens[g]]
            for _ in range(abs(e)):
                coset = col[coset]
        return coset

    def step(self, coset: int, column: int) -> int:
        i, inv = divmod(column, 2)
        return (self._inverse if inv else self.images)[i][coset]

    def is_consistent(self) -> bool:
        """Relators act trivially on every coset and subgroup generators fix coset 0."""
        for r in self.presentation.relators:
            if any(self.act(c, r) != c for c in range(self.index)):
                return False
        return all(self.act(0, w) == 0 for w in self.subgroup_generators)

    def as_json(self) -> dict:
        return {
            "index": self.index,
            "table": {
                g: [c + 1 for c in col]
                for g, col in zip(self.presentation.generators, self.images)
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json())

    @classmethod
    def from_json(cls, data, presentation: Presentation,
                  subgroup_generators: Sequence[Word] = ()) -> "CosetTable":
        if isinstance(data, str):
            data = json.loads(data)
        d = data["index"]
        images = []
        for g in presentation.generators:
            col = [c - 1 for c in data["table"][g]]
            if len(col) != d:
                raise IncompleteTableError(f"column for {g} has {len(col)} entries, expected {d}")
            images.append(col)
        return cls(presentation, tuple(subgroup_generators), tuple(images))

    def schreier_tree(self) -> tuple[list[Word], set[tuple[int, int]]]:
        """Breadth-first transversal words and the spanning-tree edges ``(coset, generator)``.

        A tree edge ``(c, i)`` means ``c * gen_i`` is the tree child or parent of ``c``.
        """
        gens = self.presentation.generators
        words: list[Word | None] = [None] * self.index
        words[0] = Word()
        tree = set()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for col in range(2 * len(gens)):
                i, inv = divmod(col, 2)
                nxt = self.step(c, col)
                if words[nxt] is None:
                    words[nxt] = words[c] * Word(((gens[i], -1 if inv else 1),))
                    tree.add((nxt, i) if inv else (c, i))
                    queue.append(nxt)
        return words, tree

    def subgroup_schreier_generators(self) -> list[Word]:
        """Nontrivial Schreier generators ``t(c) x t(c x)^-1`` of the stabilizer of coset 0."""
        words, tree = self.schreier_tree()
        out = []
        for c in range(self.index):
            for i, g in enumerate(self.presentation.generators):
                if (c, i) not in tree:
                    out.append(words[c] * Word.gen(g) * words[self.images[i][c]].inverse())
        return out


def _standardize(rows: list[list[int]], start: int, ncols: int) -> list[list[int]]:
    order = {start: 0}
    seq = [start]
    k = 0
    while k < len(seq):
        c = seq[k]
        for x in range(ncols):
            nxt = rows[c][x]
            if nxt not in order:
                order[nxt] = len(seq)
                seq.append(nxt)
        k += 1
    return [[order[rows[c][x]] for x in range(ncols)] for c in seq]


def _rows_to_table(p: Presentation, subgens, rows: list[list[int]]) -> CosetTable:
    a = p.num_generators
    images = tuple(tuple(row[2 * i] for row in rows) for i in range(a))
    return CosetTable(p, tuple(subgens), images)


class _Enumerator:
    """Relator-driven (HLT) enumeration with coincidence processing."""

    def __init__(self, p: Presentation, max_cosets: int):
        self.ncols = 2 * p.num_generators
        self.table: list[list[int | None]] = [[None] * self.ncols]
        self.parent = [0]
        self.live = 1
        self.max_cosets = max_cosets

    @staticmethod
    def inv(x: int) -> int:
        return x ^ 1

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int):
        if self.live >= self.max_cosets:
            raise CosetOverflowError(
                f"coset enumeration exceeded {self.max_cosets} live cosets"
            )
        new = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(new)
        self.live += 1
        self.table[c][x] = new
        self.table[new][self.inv(x)] = c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def merge(self, k: int, l: int, queue: list[int]):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        queue.append(hi)
        self.live -= 1

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = self.table[g][x]
                if d is None:
                    continue
                self.table[d][self.inv(x)] = None
                mu, nu = self.rep(g), self.rep(d)
                if self.table[mu][x] is not None:
                    self.merge(nu, self.table[mu][x], queue)
                elif self.table[nu][self.inv(x)] is not None:
                    self.merge(mu, self.table[nu][self.inv(x)], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][self.inv(x)] = mu

    def scan_and_fill(self, c: int, w: list[int]):
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] is not None:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][self.inv(w[j])] is not None:
                b = t[b][self.inv(w[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][self.inv(w[i])] = f
                return
            self.define(f, w[i])

    def run(self, relators: list[list[int]], subgens: list[list[int]]):
        for w in subgens:
            if w:
                self.scan_and_fill(0, w)
        c = 0
        while c < len(self.table):
            if self.is_live(c):
                for r in relators:
                    self.scan_and_fill(c, r)
                    if not self.is_live(c):
                        break
                if self.is_live(c):
                    for x in range(self.ncols):
                        if self.table[c][x] is None:
                            self.define(c, x)
            c += 1


def coset_enumerate(p: Presentation, subgens: Sequence[Word],
                    max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgens``.

    Raises :class:`CosetOverflowError` when more than ``max_cosets`` live cosets
    are needed; the result is never a truncated table.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    subgens = tuple(subgens)
    sub_cols = [_columns(p, w) for w in subgens]
    rel_cols = [_columns(p, r) for r in p.relators]
    if p.num_generators == 0:
        return CosetTable(p, subgens, ())
    e = _Enumerator(p, max_cosets)
    e.run(rel_cols, sub_cols)
    rows = _standardize(e.table, 0, e.ncols)
    table = _rows_to_table(p, subgens, rows)
    assert table.is_consistent()
    return table


# -- low-index subgroups ------------------------------------------------------


class _Partial:
    """A partial coset table for the low-index search; new cosets appear in standard order."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows, ncols):
        self.rows = rows
        self.ncols = ncols

    def copy(self) -> "_Partial":
        return _Partial([r[:] for r in self.rows], self.ncols)

    def first_undefined(self):
        for c, row in enumerate(self.rows):
            for x, v in enumerate(row):
                if v is None:
                    return c, x
        return None

    def assign(self, c: int, x: int, d: int) -> bool:
        rows = self.rows
        if rows[c][x] is not None:
            return rows[c][x] == d
        if rows[d][x ^ 1] is not None:
            return False
        rows[c][x] = d
        rows[d][x ^ 1] = c
        return True

    def propagate(self, relators: list[list[int]]) -> bool:
        """Deduce forced entries from the relators; False on a contradiction."""
        rows = self.rows
        changed = True
        while changed:
            changed = False
            for c in range(len(rows)):
                for w in relators:
                    f, i = c, 0
                    n = len(w)
                    while i < n and rows[f][w[i]] is not None:
                        f = rows[f][w[i]]
                        i += 1
                    if i == n:
                        if f != c:
                            return False
                        continue
                    b, j = c, n - 1
                    while j > i and rows[b][w[j] ^ 1] is not None:
                        b = rows[b][w[j] ^ 1]
                        j -= 1
                    if i == j:
                        if not self.assign(f, w[i], b):
                            return False
                        changed = True
        return True


def _canonical_over_bases(rows: list[list[int]], ncols: int) -> list[list[int]]:
    return min(_standardize(rows, b, ncols) for b in range(len(rows)))


def low_index_subgroups(p: Presentation, max_index: int = 6, conjugacy_classes: bool = True,
                        max_nodes: int = 5_000_000) -> list[CosetTable]:
    """All subgroups of index at most ``max_index``, as standardized coset tables.

    With ``conjugacy_classes`` (the default) one representative per conjugacy
    class is returned. Tables are ordered by index, then lexicographically.
    ``max_nodes`` bounds the number of search nodes visited.
    """
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    a = p.num_generators
    if a == 0:
        return [CosetTable(p, (), ())]
    ncols = 2 * a
    relators = [_columns(p, r) for r in p.relators]
    relators = [w for w in relators if w]
    found: list[list[list[int]]] = []
    nodes = 0

    start = _Partial([[None] * ncols], ncols)
    if not start.propagate(relators):
        return []
    stack = [start]
    while stack:
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceededError(f"low-index search exceeded {max_nodes} nodes")
        t = stack.pop()
        spot = t.first_undefined()
        if spot is None:
            rows = t.rows
            if all(_trace(rows, c, w) == c for c in range(len(rows)) for w in relators):
                if not conjugacy_classes or _canonical_over_bases(rows, ncols) == rows:
                    found.append(rows)
            continue
        c, x = spot
        candidates = []
        # pushed in reverse so the search pops cosets in increasing order
        if len(t.rows) < max_index:
            child = t.copy()
            child.rows.append([None] * ncols)
            if child.assign(c, x, len(child.rows) - 1) and child.propagate(relators):
                candidates.append(child)
        for d in range(len(t.rows) - 1, -1, -1):
            if t.rows[d][x ^ 1] is None:
                child = t.copy()
                if child.assign(c, x, d) and child.propagate(relators):
                    candidates.append(child)
        stack.extend(candidates)

    found.sort(key=lambda rows: (len(rows), rows))
    tables = []
    for rows in found:
        table = _rows_to_table(p, (), rows)
        gens = table.subgroup_schreier_generators()
        tables.append(CosetTable(p, tuple(gens), table.images))
    return tables


def _trace(rows, c: int, w: list[int]) -> int:
    for x in w:
        c = rows[c][x]
    return c


# -- Reidemeister-Schreier ----------------------------------------------------


@dataclass(frozen=True)
class RewrittenPresentation:
    """Presentation of a finite-index subgroup on its Schreier generators.

    ``relators`` holds exactly one rewritten relator per (relator, coset) pair,
    including any that reduced to the empty word; ``presentation`` is the
    simplified view without them.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    generator_words: dict
    transversal: tuple[Word, ...]
    table: CosetTable

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    @property
    def trivial_relators(self) -> int:
        return sum(1 for r in self.relators if not r)

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.generators, tuple(r for r in self.relators if r),
                            label=f"index-{self.table.index} subgroup")

    def as_json(self) -> dict:
        from .words import format_word
        return {
            "generators": list(self.generators),
            "relators": [format_word(r) for r in self.relators],
            "generator_words": {k: format_word(v) for k, v in self.generator_words.items()},
            "trivial_relators": self.trivial_relators,
        }


def reidemeister_schreier(p: Presentation, t: CosetTable) -> RewrittenPresentation:
    """Rewrite ``p`` into a presentation of the subgroup described by ``t``.

    Generators are the Schreier generators off the breadth-first spanning tree:
    exactly ``(a-1)d + 1`` of them, with ``b*d`` rewritten relators.
    """
    if t.presentation.generators != p.generators:
        raise IncompleteTableError("coset table belongs to a different presentation")
    for r in p.relators:
        for c in range(t.index):
            if t.act(c, r) != c:
                raise IncompleteTableError(f"relator {r} does not close at coset {c + 1}")
    words, tree = t.schreier_tree()
    names: dict[tuple[int, int], str] = {}
    gen_words = {}
    for c in range(t.index):
        for i, g in enumerate(p.generators):
            if (c, i) in tree:
                continue
            name = f"s{len(names) + 1}"
            names[(c, i)] = name
            gen_words[name] = words[c] * Word.gen(g) * words[t.images[i][c]].inverse()
    index = {g: i for i, g in enumerate(p.generators)}
    relators = []
    for r in p.relators:
        for c0 in range(t.index):
            c = c0
            out = []
            for g, e in r.runs:
                i = index[g]
                for _ in range(abs(e)):
                    if e > 0:
                        if (c, i) in names:
                            out.append((names[(c, i)], 1))
                        c = t.images[i][c]
                    else:
                        c = t._inverse[i][c]
                        if (c, i) in names:
                            out.append((names[(c, i)], -1))
            relators.append(Word(out))
    return RewrittenPresentation(
        tuple(names.values()), tuple(relators), gen_words, tuple(words), t
    )


def rs_counts(a: int, b: int, d: int) -> tuple[int, int, int]:
    """Generator count, relator count and deficiency bound after passing to index ``d``."""
    if a < 1 or b < 0 or d < 1:
        raise ValueError(f"need a >= 1, b >= 0, d >= 1; got {a}, {b}, {d}")
    return (a - 1) * d + 1, b * d, (a - b - 1) * d + 1

"""Brute-force reference computations, deliberately independent of the library code paths."""

from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np


# -- words ---------------------------------------------------------------------


def letters_of(runs):
    out = []
    for g, e in runs:
        out += [(g, 1 if e > 0 else -1)] * abs(e)
    return out


def naive_reduce(letters):
    """Repeatedly delete adjacent inverse pairs until none remain."""
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            (a, s), (b, t) = letters[i], letters[i + 1]
            if a == b and s == -t:
                del letters[i:i + 2]
                changed = True
                break
    return letters


def divisor_sweep_power(letters):
    """Largest n with letters == prefix * n, trying every divisor of the length."""
    n_letters = len(letters)
    best = 1
    for d in range(1, n_letters + 1):
        if n_letters % d == 0:
            n = n_letters // d
            if letters[:d] * n == letters:
                best = max(best, n)
    return best


def has_proper_period(letters):
    return divisor_sweep_power(letters) > 1


# -- integer matrices ----------------------------------------------------------


def bareiss_det(m):
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinantal_invariant_factors(m):
    """Invariant factors as quotients of gcds of k x k minors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, bareiss_det([[m[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i] // divisors[i - 1] for i in range(1, len(divisors))]


# -- polynomials ---------------------------------------------------------------


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def product_betti(polys):
    full = reduce(poly_mul, polys, [1])
    full += [0, 0, 0]
    return full[1], full[2]


# -- permutation representations -------------------------------------------------


def _word_columns(generators, word):
    index = {g: i for i, g in enumerate(generators)}
    return [(index[g], e > 0) for g, e in letters_of(word.runs)]


def _hom_batches(num_gens, d):
    perms = np.array(list(itertools.permutations(range(d))), dtype=np.int64)
    n = len(perms)
    if num_gens == 0:
        yield np.zeros((1, 0, d), dtype=np.int64)
        return
    rest = num_gens - 1
    if rest:
        grid = np.stack(np.meshgrid(*[np.arange(n)] * rest, indexing="ij"), -1).reshape(-1, rest)
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    for first in range(n):
        idx = np.concatenate([np.full((len(grid), 1), first), grid], axis=1)
        yield perms[idx]  # shape (batch, num_gens, d)


def _apply(images, inverses, cols, start):
    cur = start
    for gi, positive in cols:
        img = images[:, gi, :] if positive else inverses[:, gi, :]
        cur = np.take_along_axis(img, cur, axis=1)
    return cur


def _inverse_perms(images):
    inv = np.empty_like(images)
    b, a, d = images.shape
    rows = np.arange(d)
    for gi in range(a):
        np.put_along_axis(inv[:, gi, :], images[:, gi, :], np.broadcast_to(rows, (b, d)), axis=1)
    return inv


def _transitive(images, d):
    b, a, _ = images.shape
    reach = np.zeros((b, d), dtype=bool)
    reach[:, 0] = True
    for _ in range(d):
        new = reach.copy()
        for gi in range(a):
            moved = np.zeros_like(reach)
            np.put_along_axis(moved, images[:, gi, :], reach, axis=1)
            new |= moved
        reach = new
    return reach.all(axis=1)


def transitive_representations(presentation, d, subgroup_words=()):
    """Yield batches of generator images (batch, a, d) for transitive actions on d points
    in which every relator acts trivially and every subgroup word fixes point 0."""
    gens = presentation.generators
    rels = [_word_columns(gens, r) for r in presentation.relators]
    subs = [_word_columns(gens, w) for w in subgroup_words]
    for images in _hom_batches(len(gens), d):
        b = len(images)
        inverses = _inverse_perms(images)
        ok = np.ones(b, dtype=bool)
        ident = np.broadcast_to(np.arange(d), (b, d))
        for cols in rels:
            ok &= (_apply(images, inverses, cols, ident) == ident).all(axis=1)
        for cols in subs:
            ok &= _apply(images, inverses, cols, np.zeros((b, 1), dtype=np.int64))[:, 0] == 0
        if d > 1:
            ok &= _transitive(images, d)
        if ok.any():
            yield images[ok]


def subgroup_counts(presentation, d):
    """(number of subgroups, number of conjugacy classes) of index exactly d."""
    perms = np.array(list(itertools.permutations(range(d))), dtype=np.int64)
    total = 0
    fixed = 0
    for images in transitive_representations(presentation, d):
        total += len(images)
        for sigma in perms:
            # sigma commutes with every generator image
            lhs = sigma[images]
            rhs = images[:, :, sigma]
            fixed += int((lhs == rhs).all(axis=(1, 2)).sum())
    subgroups = total // math.factorial(d - 1)
    classes = fixed // math.factorial(d)
    assert subgroups * math.factorial(d - 1) == total
    assert classes * math.factorial(d) == fixed
    return subgroups, classes


def index_by_actions(presentation, subgroup_words, dmax):
    """Largest degree d <= dmax of a transitive action whose point stabilizer contains
    the subgroup; equals the index whenever the index is at most dmax."""
    best = 1
    for d in range(2, dmax + 1):
        if any(True for _ in transitive_representations(presentation, d, subgroup_words)):
            best = d
    return best

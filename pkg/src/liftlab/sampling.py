"""Seeded random polynomials and matrices for property checks."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .polyring import PolyRing, Polynomial


def random_polynomial(
    ring: PolyRing,
    rng: random.Random,
    max_degree: int = 4,
    max_terms: int = 6,
    coeff_bound: int = 9,
    homogeneous: bool = False,
) -> Polynomial:
    n = ring.nvars
    terms = {}
    deg = rng.randint(0, max_degree)
    for _ in range(rng.randint(0, max_terms)):
        d = deg if homogeneous else rng.randint(0, max_degree)
        e = [0] * n
        for i in rng.choices(range(n), k=d) if n else []:
            e[i] += 1
        c = rng.randint(-coeff_bound, coeff_bound)
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return Polynomial(ring, terms)


def random_alternating(n: int, rng: random.Random, bound: int = 9) -> list[list[int]]:
    A = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randint(-bound, bound)
            A[i][j] = v
            A[j][i] = -v
    return A


def random_int_matrix(n: int, rng: random.Random, bound: int = 9) -> list[list[int]]:
    return [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]


def monomials_up_to(nvars: int, degree: int):
    """All exponent vectors of total degree <= degree."""
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            yield tuple(e)

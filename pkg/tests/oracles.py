"""Independent reference values and brute-force oracles for the tests."""

from fractions import Fraction
from itertools import combinations

import numpy as np

COXETER_NUMBER = {"A1": 2, "A2": 3, "A3": 4, "A4": 5, "B2": 4, "B3": 6, "B4": 8,
                  "D4": 6, "F4": 12, "H3": 10, "H4": 30}

# Degrees of the basic invariants, from the classification tables.
DEGREES = {"A1": [2], "A2": [2, 3], "A3": [2, 3, 4], "A4": [2, 3, 4, 5],
           "B2": [2, 4], "B3": [2, 4, 6], "B4": [2, 4, 6, 8], "D4": [2, 4, 4, 6],
           "F4": [2, 6, 8, 12], "H3": [2, 6, 10], "H4": [2, 12, 20, 30]}
DEGREES.update({f"I2({m})": [2, m] for m in range(3, 13)})

GROUP_ORDER = {"A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48, "B4": 384,
               "D4": 192, "F4": 1152, "H3": 120, "H4": 14400}
GROUP_ORDER.update({f"I2({m})": 2 * m for m in range(3, 13)})


def catalan_from_degrees(spec):
    degrees = DEGREES[spec]
    h = max(degrees)
    value = Fraction(1)
    for d in degrees:
        value *= Fraction(h + d, d)
    assert value.denominator == 1
    return int(value)


def householder(v):
    return np.eye(len(v)) - 2 * np.outer(v, v)


def brute_facets(rho_vectors, c_matrix, n):
    """Index tuples (1-based) with R(rho_in) ... R(rho_i1) = c, by plain matrices."""
    out = []
    for combo in combinations(range(len(rho_vectors)), n):
        product = np.eye(n)
        for j in combo:
            product = householder(rho_vectors[j]) @ product
        if np.allclose(product, c_matrix, atol=1e-9):
            out.append(tuple(j + 1 for j in combo))
    return out


def brute_triples(positive):
    """Unordered {sigma, tau} with rho = a sigma + b tau, a, b > 0, via Gram determinants."""
    found = set()
    N = len(positive)
    for p, q in combinations(range(N), 2):
        s, t = positive[p], positive[q]
        g = np.array([[s @ s, s @ t], [t @ s, t @ t]])
        for r in range(N):
            if r in (p, q):
                continue
            v = positive[r]
            if abs(np.linalg.det(np.stack([s, t, v]) @ np.stack([s, t, v]).T)) > 1e-9:
                continue
            a, b = np.linalg.solve(g, [v @ s, v @ t])
            if a > 1e-9 and b > 1e-9:
                found.add((p, q, r))
    return found

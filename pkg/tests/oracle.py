"""Independent brute-force model of the truncated GF(2) ring.

Deliberately naive: support sets of exponent tuples, quadratic-time
products, no shared code with the package's array implementation.  Tests
use it to compute expected values.
"""

from __future__ import annotations

from itertools import product


class DictPoly:
    def __init__(self, k: int, d: int, support=()):
        self.k = k
        self.d = d
        self.support = set(tuple(e) for e in support)

    @classmethod
    def one(cls, k, d):
        return cls(k, d, [(0,) * k])

    @classmethod
    def zero(cls, k, d):
        return cls(k, d)

    def add(self, other):
        return DictPoly(self.k, self.d, self.support ^ other.support)

    def mul(self, other):
        out = set()
        for e in self.support:
            for f in other.support:
                g = tuple(a + b for a, b in zip(e, f))
                if all(x <= self.d for x in g):
                    out ^= {g}
        return DictPoly(self.k, self.d, out)

    def mul_form(self, bits):
        form = DictPoly(
            self.k,
            self.d,
            [
                tuple(1 if j == i else 0 for j in range(self.k))
                for i, b in enumerate(bits)
                if b and self.d >= 1
            ],
        )
        return self.mul(form)

    def sorted_support(self):
        return tuple(sorted(self.support))


def product_of_forms_oracle(k, d, forms):
    acc = DictPoly.one(k, d)
    for bits in forms:
        acc = acc.mul_form(bits)
    return acc


def all_polynomials(k, d):
    """Every element of a tiny ring, for exhaustive checks."""
    cells = list(product(range(d + 1), repeat=k))
    for mask in range(1 << len(cells)):
        yield DictPoly(k, d, [c for i, c in enumerate(cells) if mask >> i & 1])

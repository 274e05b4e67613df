"""Constrained equipartition instances and their counting invariants.

An instance asks for k hyperplanes in R^d such that, for each stage i,
hyperplanes i..k equipartition m_i given masses (a "cascade"), hyperplane i
contains a prescribed (a_i - 1)-dimensional flat, and the pairs listed in
`ortho` are orthogonal.  `extra` holds any further characters imposed
directly as sign vectors.

Every scalar condition consumes one of the k*d degrees of freedom of the
arrangement, which gives the counting bound  k * Delta >= C  with

    C = sum_i [ m_i * (2^(k-i+1) - 1) + a_i ] + |ortho| + |extra|.

Instances with C = k*d are called tight.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exceptions import ContradictionError, RangeError, ShapeError
from .gf2 import SignVector, nonzero_vectors_on

PairSet = frozenset


def all_pairs(k: int) -> frozenset[tuple[int, int]]:
    """Full orthogonality: every pair (r,s), 1 <= r < s <= k."""
    return frozenset((r, s) for r in range(1, k + 1) for s in range(r + 1, k + 1))


def last_orthogonal(k: int) -> frozenset[tuple[int, int]]:
    """Pairs (r,k) for r < k: every earlier hyperplane orthogonal to the last."""
    return frozenset((r, k) for r in range(1, k))


def excluding_first_pair(k: int) -> frozenset[tuple[int, int]]:
    """All pairs except (1,2)."""
    return all_pairs(k) - {(1, 2)}


ORTHO_UNIVERSES = {
    "all": all_pairs,
    "last": last_orthogonal,
    "not12": excluding_first_pair,
}


@dataclass(frozen=True)
class ConstraintProblem:
    k: int
    m: tuple[int, ...]
    a: tuple[int, ...]
    ortho: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    extra: tuple[SignVector, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 1:
            raise RangeError(f"k must be >= 1, got {self.k}")
        if len(self.m) != self.k or len(self.a) != self.k:
            raise ShapeError(
                f"m and a must have length k={self.k}: m={self.m}, a={self.a}"
            )
        if any(x < 0 for x in self.m) or any(x < 0 for x in self.a):
            raise RangeError("m and a entries must be non-negative")
        for pair in self.ortho:
            r, s = pair
            if not (1 <= r < s <= self.k):
                raise RangeError(f"orthogonality pair {pair} must satisfy 1<=r<s<=k")
        for v in self.extra:
            if v.k != self.k:
                raise ShapeError(f"extra form {v} has length {v.k}, expected {self.k}")

    @classmethod
    def of(
        cls,
        k: int,
        m: Sequence[int] = (),
        a: Sequence[int] = (),
        ortho: Iterable[Sequence[int]] = (),
        extra: Iterable[Sequence[int] | SignVector] = (),
    ) -> "ConstraintProblem":
        """Build a problem, zero-padding m and a to length k.

        `ortho` takes (r,s) pairs with 1-based indices; `extra` takes sign
        vectors either as SignVector or as 0/1 sequences.
        """
        mm = tuple(int(x) for x in m) + (0,) * (k - len(tuple(m)))
        aa = tuple(int(x) for x in a) + (0,) * (k - len(tuple(a)))
        oo = frozenset((int(r), int(s)) for r, s in ortho)
        xs = tuple(
            v if isinstance(v, SignVector) else SignVector(tuple(int(b) for b in v))
            for v in extra
        )
        return cls(k=k, m=mm, a=aa, ortho=oo, extra=xs)

    # ------------------------------------------------------------------
    def sorted_ortho(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.ortho))

    def sorted_extra_bits(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(v.bits for v in self.extra))

    def canonical_key(self) -> tuple:
        """Hashable identity that ignores listing order of ortho and extra."""
        return (self.k, self.m, self.a, self.sorted_ortho(), self.sorted_extra_bits())

    def describe(self) -> str:
        parts = [f"m={self.m}"]
        if any(self.a):
            parts.append(f"a={self.a}")
        if self.ortho:
            parts.append("O={" + ",".join(f"({r},{s})" for r, s in self.sorted_ortho()) + "}")
        if self.extra:
            parts.append("extra=" + ";".join("".join(map(str, b)) for b in self.sorted_extra_bits()))
        return f"({', '.join(parts)}; k={self.k})"

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "m": list(self.m),
            "a": list(self.a),
            "ortho": [list(p) for p in self.sorted_ortho()],
            "extra": [list(b) for b in self.sorted_extra_bits()],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ConstraintProblem":
        k = int(obj["k"])
        return cls.of(
            k,
            m=obj.get("m", ()),
            a=obj.get("a", ()),
            ortho=obj.get("ortho", ()),
            extra=obj.get("extra", ()),
        )

    @classmethod
    def from_json(cls, text: str) -> "ConstraintProblem":
        return cls.from_dict(json.loads(text))


# ----------------------------------------------------------------------
# counting
# ----------------------------------------------------------------------
def constraint_dimension(p: ConstraintProblem) -> int:
    """Total number of scalar conditions the instance imposes."""
    total = 0
    for i in range(1, p.k + 1):
        total += p.m[i - 1] * (2 ** (p.k - i + 1) - 1) + p.a[i - 1]
    return total + len(p.ortho) + len(p.extra)


def lower_bound_dim(p: ConstraintProblem) -> int:
    """Smallest d compatible with the degree-of-freedom count, ceil(C/k)."""
    c = constraint_dimension(p)
    return -(-c // p.k)


def ramos_L(m: int, k: int) -> int:
    """Degree-of-freedom lower bound ceil(m*(2^k - 1)/k) for the
    unconstrained m-mass, k-hyperplane problem."""
    if m < 1:
        raise RangeError(f"ramos_L requires m >= 1, got {m}")
    if k < 1:
        raise RangeError(f"ramos_L requires k >= 1, got {k}")
    return -(-(m * (2**k - 1)) // k)


def upper_U(m: int, k: int) -> int:
    """Best known general upper bound: with m = 2^q + r, 0 <= r < 2^q,
    returns 2^(q+k-1) + r."""
    if m < 1:
        raise RangeError(f"upper_U requires m >= 1, got {m}")
    if k < 1:
        raise RangeError(f"upper_U requires k >= 1, got {k}")
    q = m.bit_length() - 1
    r = m - (1 << q)
    return (1 << (q + k - 1)) + r


# ----------------------------------------------------------------------
# compilation into linear forms
# ----------------------------------------------------------------------
def compile_forms(p: ConstraintProblem) -> list[SignVector]:
    """Translate the instance into its multiset of GF(2) linear forms.

    Stage i contributes m_i copies of every nonzero vector supported on
    coordinates i..k; containment contributes a_i copies of e_i;
    each orthogonal pair contributes e_r + e_s; extra forms pass through.
    The output length always equals constraint_dimension(p).
    """
    forms: list[SignVector] = []
    for i in range(1, p.k + 1):
        if p.m[i - 1]:
            stage_vectors = nonzero_vectors_on(p.k, i)
            forms.extend(stage_vectors * p.m[i - 1])
    for i in range(1, p.k + 1):
        if p.a[i - 1]:
            forms.extend([SignVector.basis(p.k, i)] * p.a[i - 1])
    for r, s in sorted(p.ortho):
        forms.append(SignVector.pair(p.k, r, s))
    forms.extend(p.extra)
    return forms


# ----------------------------------------------------------------------
# optimality / maximality / balance
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Classification:
    """Quality labels for an established dimension d of an instance.

    lower_dim      ceil(C/k), the counting lower bound on the dimension.
    optimal        L(m1;k) <= d < L(m1+1;k); None when m1 = 0 (the notion
                   needs a first-stage mass).
    maximal_stages stages i where bumping m_i (and zeroing later stages)
                   already forces a higher dimension.
    j_maximal      largest j with stages 1..j all maximal (0 if none).
    balanced       m_{i+1} <= 2 for all 1 <= i <= k-1.
    tight          C = k*d exactly.
    """

    lower_dim: int
    optimal: bool | None
    maximal_stages: frozenset[int]
    j_maximal: int
    balanced: bool
    tight: bool

    @property
    def fully_maximal(self) -> bool:
        return self.j_maximal > 0 and all(
            i in self.maximal_stages for i in range(1, self.j_maximal + 1)
        )

    def to_dict(self) -> dict:
        return {
            "lower_dim": self.lower_dim,
            "optimal": self.optimal,
            "maximal_stages": sorted(self.maximal_stages),
            "j_maximal": self.j_maximal,
            "balanced": self.balanced,
            "tight": self.tight,
        }


def _bumped_stage(p: ConstraintProblem, i: int) -> ConstraintProblem:
    """m truncated after stage i with m_i incremented; a, ortho, extra kept."""
    m = list(p.m[:i]) + [0] * (p.k - i)
    m[i - 1] += 1
    return ConstraintProblem(k=p.k, m=tuple(m), a=p.a, ortho=p.ortho, extra=p.extra)


def classify(p: ConstraintProblem, d: int) -> Classification:
    """Label an instance known (or claimed) to hold at dimension d."""
    c = constraint_dimension(p)
    lower = lower_bound_dim(p)
    if d < lower:
        raise ContradictionError(
            f"d={d} is below the counting lower bound ceil({c}/{p.k})={lower}"
        )
    if p.m[0] >= 1:
        optimal = ramos_L(p.m[0], p.k) <= d < ramos_L(p.m[0] + 1, p.k)
    else:
        optimal = None
    maximal = frozenset(
        i
        for i in range(1, p.k + 1)
        if d < lower_bound_dim(_bumped_stage(p, i))
    )
    j_max = 0
    while j_max + 1 in maximal:
        j_max += 1
    balanced = all(x <= 2 for x in p.m[1:])
    return Classification(
        lower_dim=lower,
        optimal=optimal,
        maximal_stages=maximal,
        j_maximal=j_max,
        balanced=balanced,
        tight=(c == p.k * d),
    )


def dominates(weaker: ConstraintProblem, stronger: ConstraintProblem) -> bool:
    """True iff every condition of `weaker` is also imposed by `stronger`,
    so a certificate for `stronger` at dimension d transfers to `weaker`."""
    if weaker.k != stronger.k:
        raise ShapeError(f"k mismatch: {weaker.k} vs {stronger.k}")
    if any(w > s for w, s in zip(weaker.m, stronger.m)):
        return False
    if any(w > s for w, s in zip(weaker.a, stronger.a)):
        return False
    if not weaker.ortho <= stronger.ortho:
        return False
    weak_extra = Counter(v.bits for v in weaker.extra)
    strong_extra = Counter(v.bits for v in stronger.extra)
    return all(strong_extra[bits] >= n for bits, n in weak_extra.items())

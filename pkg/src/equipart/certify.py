"""The core decision procedure.

An instance compiles to a multiset of D GF(2) linear forms.  Working in
Z2[u1..uk]/(u1^{d+1},...,uk^{d+1}), let h be the product of those forms.

strict mode (D = k*d):  if h equals the top monomial u1^d*...*uk^d, the
instance holds in dimension d, with every degree of freedom consumed.
relaxed mode (D <= k*d):  if h is nonzero the instance still holds in
dimension d.  The relaxed reading extends the strict one: the product is
the top characteristic class of the D-dimensional bundle assembled from
the form characters, and a nonzero class already rules out a nonvanishing
section.  Certificates record which mode produced them.

Either way the criterion is one-sided: an inconclusive result never shows
the instance fails at d.

The verify_* functions independently cross-check the closed-form
expansions this machinery relies on (Vandermonde products, Dickson
invariants, and their shifted product).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    EquipartError,
    InfeasibleByCountingError,
    RangeError,
)
from .gf2 import (
    RingShape,
    SignVector,
    TruncatedPolynomial,
    nonzero_vectors_on,
    product_of_forms,
)
from .problems import (
    ConstraintProblem,
    compile_forms,
    constraint_dimension,
    dominates,
    lower_bound_dim,
)

MODES = ("strict", "relaxed")


@dataclass(frozen=True)
class Certificate:
    """Outcome of the criterion for one (instance, d, mode) triple."""

    problem: ConstraintProblem
    d: int
    mode: str
    form_count: int
    kd: int
    verdict: str
    h_is_top: bool
    h_is_zero: bool
    h_digest: str
    tight: bool
    derivation: str | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "d": self.d,
            "mode": self.mode,
            "D": self.form_count,
            "kd": self.kd,
            "verdict": self.verdict,
            "h_is_top": self.h_is_top,
            "h_is_zero": self.h_is_zero,
            "h_digest": self.h_digest,
            "tight": self.tight,
            "derivation": self.derivation,
        }


def check(
    p: ConstraintProblem,
    d: int,
    mode: str = "strict",
    return_polynomial: bool = False,
) -> Certificate | tuple[Certificate, TruncatedPolynomial]:
    """Run the criterion for instance p at dimension d.

    Certified means the instance holds in R^d (for arbitrary masses and
    flats); inconclusive asserts nothing.
    """
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {MODES}, got {mode!r}")
    if d < 1:
        raise RangeError(f"d must be >= 1, got {d}")
    form_count = constraint_dimension(p)
    kd = p.k * d
    if form_count > kd:
        raise InfeasibleByCountingError(
            f"{form_count} conditions exceed the k*d = {kd} degrees of freedom; "
            f"the instance cannot hold at d={d}"
        )
    if mode == "strict" and form_count != kd:
        raise DimensionMismatchError(
            f"strict mode needs exactly k*d forms: D={form_count}, kd={kd}"
        )
    h = product_of_forms(RingShape(p.k, d), compile_forms(p))
    is_top = h.is_top()
    is_zero = h.is_zero()
    certified = is_top if mode == "strict" else not is_zero
    cert = Certificate(
        problem=p,
        d=d,
        mode=mode,
        form_count=form_count,
        kd=kd,
        verdict="certified" if certified else "inconclusive",
        h_is_top=is_top,
        h_is_zero=is_zero,
        h_digest=h.digest(),
        tight=(form_count == kd),
    )
    return (cert, h) if return_polynomial else cert


def find_min_certified_d(
    p: ConstraintProblem, d_max: int, mode: str = "relaxed"
) -> tuple[int, Certificate] | None:
    """Smallest d in [counting lower bound, d_max] where check certifies.

    Strict mode is tied to tightness, so it only probes d = C/k (when that
    is an integer); relaxed mode scans every d in the range.
    """
    if mode not in MODES:
        raise ConfigurationError(f"mode must be one of {MODES}, got {mode!r}")
    lower = max(lower_bound_dim(p), 1)
    if d_max < lower:
        return None
    if mode == "strict":
        c = constraint_dimension(p)
        if c % p.k != 0:
            return None
        d = c // p.k
        if not lower <= d <= d_max or d < 1:
            return None
        cert = check(p, d, "strict")
        return (d, cert) if cert.certified else None
    for d in range(lower, d_max + 1):
        cert = check(p, d, "relaxed")
        if cert.certified:
            return (d, cert)
    return None


def transfer_by_domination(
    weaker: ConstraintProblem, certificate: Certificate
) -> Certificate:
    """Derive a certificate for a weaker instance from a certified stronger
    one at the same d.  The derived certificate is always relaxed-mode and
    makes no tightness claim; its h fields describe the stronger instance's
    witnessing product."""
    if not certificate.certified:
        raise EquipartError("cannot transfer from an inconclusive certificate")
    if not dominates(weaker, certificate.problem):
        raise EquipartError(
            f"{weaker.describe()} is not dominated by {certificate.problem.describe()}"
        )
    return Certificate(
        problem=weaker,
        d=certificate.d,
        mode="relaxed",
        form_count=constraint_dimension(weaker),
        kd=weaker.k * certificate.d,
        verdict="certified",
        h_is_top=certificate.h_is_top,
        h_is_zero=certificate.h_is_zero,
        h_digest=certificate.h_digest,
        tight=False,
        derivation=(
            f"implied by domination from {certificate.problem.describe()} "
            f"at d={certificate.d}"
        ),
    )


# ----------------------------------------------------------------------
# closed-form identity verifiers
# ----------------------------------------------------------------------
def _permutation_sum(
    shape: RingShape, variables: list[int], exponents: list[int]
) -> TruncatedPolynomial:
    """XOR of monomials u_{sigma(v_1)}^{e_1} * ... over all permutations
    sigma of `variables` (1-based)."""
    support = []
    for perm in permutations(variables):
        exps = [0] * shape.k
        for var, e in zip(perm, exponents):
            exps[var - 1] = e
        support.append(tuple(exps))
    return TruncatedPolynomial.from_support(shape, support)


def verify_vandermonde(k: int, j: int, d: int) -> bool:
    """Product of the pair forms u_r + u_s over j <= r < s <= k equals the
    permutation sum with exponents k-j, k-j-1, ..., 0.  Both sides are
    computed independently (linear-form folding vs direct monomial
    insertion)."""
    if not 1 <= j <= k - 1:
        raise RangeError(f"need 1 <= j <= k-1, got j={j}, k={k}")
    if d < k - j:
        raise RangeError(f"need d >= k-j = {k - j}, got d={d}")
    shape = RingShape(k, d)
    forms = [
        SignVector.pair(k, r, s)
        for r in range(j, k + 1)
        for s in range(r + 1, k + 1)
    ]
    lhs = product_of_forms(shape, forms)
    variables = list(range(j, k + 1))
    exponents = list(range(k - j, -1, -1))
    return lhs == _permutation_sum(shape, variables, exponents)


def verify_dickson(k: int, i: int, d: int) -> bool:
    """Product of all nonzero linear forms in u_i..u_k equals the
    permutation sum with exponents 2^(k-i), 2^(k-i-1), ..., 1."""
    if not 1 <= i <= k:
        raise RangeError(f"need 1 <= i <= k, got i={i}, k={k}")
    if d < 2 ** (k - i):
        raise RangeError(f"need d >= 2^(k-i) = {2 ** (k - i)}, got d={d}")
    shape = RingShape(k, d)
    lhs = product_of_forms(shape, nonzero_vectors_on(k, i))
    variables = list(range(i, k + 1))
    exponents = [2**e for e in range(k - i, -1, -1)]
    return lhs == _permutation_sum(shape, variables, exponents)


def verify_pki_ortho(k: int, i: int, d: int) -> bool:
    """Shifted Vandermonde: u_i^(i-1)*...*u_k^(i-1) times the pair-form
    product over i <= r < s <= k equals the permutation sum with exponents
    k-1, k-2, ..., i-1."""
    if not 1 <= i <= k:
        raise RangeError(f"need 1 <= i <= k, got i={i}, k={k}")
    if d < k - 1:
        raise RangeError(f"need d >= k-1 = {k - 1}, got d={d}")
    shape = RingShape(k, d)
    forms: list[SignVector] = []
    for r in range(i, k + 1):
        forms.extend([SignVector.basis(k, r)] * (i - 1))
    for r in range(i, k + 1):
        for s in range(r + 1, k + 1):
            forms.append(SignVector.pair(k, r, s))
    lhs = product_of_forms(shape, forms)
    variables = list(range(i, k + 1))
    exponents = list(range(k - 1, i - 2, -1))
    return lhs == _permutation_sum(shape, variables, exponents)

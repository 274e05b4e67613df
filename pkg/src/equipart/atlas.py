"""Exhaustive search for certified instances at small (k, d).

Candidates range over cascade vectors, containment counts and subsets of
an orthogonality universe, within finite caps.  A candidate is emitted iff
its condition count fits the mode (C = k*d strict, C <= k*d relaxed) and
the criterion certifies it; rows carry the certificate summary, the
quality labels and any reference-table match.  Output order is
deterministic: lexicographic in (d, m, a, sorted ortho).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Iterator

from . import knownvalues
from .certify import Certificate, check
from .exceptions import ConfigurationError, SearchSpaceError
from .problems import (
    Classification,
    ConstraintProblem,
    ORTHO_UNIVERSES,
    classify,
    constraint_dimension,
)

REPORT_COLUMNS = (
    "k",
    "d",
    "m",
    "a",
    "ortho",
    "extra",
    "D",
    "kd",
    "mode",
    "verdict",
    "optimal",
    "j_maximal",
    "balanced",
    "tight",
    "known_ref",
)


@dataclass(frozen=True)
class AtlasQuery:
    k: int
    d_range: tuple[int, int]
    mode: str = "strict"
    max_m: int = 2
    max_a: int = 0
    allow_ortho: bool = True
    allow_affine: bool = False
    ortho_universe: str | frozenset = "all"
    require_optimal: bool = False
    require_maximal_j: int | None = None
    require_balanced: bool = False
    candidate_limit: int = 2_000_000

    def universe_pairs(self) -> tuple[tuple[int, int], ...]:
        if not self.allow_ortho:
            return ()
        if isinstance(self.ortho_universe, str):
            try:
                builder = ORTHO_UNIVERSES[self.ortho_universe]
            except KeyError:
                raise ConfigurationError(
                    f"unknown ortho universe {self.ortho_universe!r}; "
                    f"expected one of {sorted(ORTHO_UNIVERSES)} or an explicit pair set"
                )
            return tuple(sorted(builder(self.k)))
        return tuple(sorted(tuple(p) for p in self.ortho_universe))

    def candidate_estimate(self) -> int:
        lo, hi = self.d_range
        n_d = max(0, hi - lo + 1)
        n_m = (self.max_m + 1) ** self.k
        n_a = (self.max_a + 1) ** self.k if self.allow_affine else 1
        n_o = 2 ** len(self.universe_pairs())
        return n_d * n_m * n_a * n_o


@dataclass(frozen=True)
class AtlasRow:
    problem: ConstraintProblem
    d: int
    certificate: Certificate
    classification: Classification
    known: knownvalues.KnownValue | None = field(default=None)

    def known_ref(self) -> str | None:
        if self.known is None:
            return None
        if self.known.exact:
            return f"={self.known.lo}"
        return f"[{self.known.lo},{self.known.hi}]"

    def to_dict(self) -> dict:
        return {
            "problem": self.problem.to_dict(),
            "d": self.d,
            "certificate": self.certificate.to_dict(),
            "classification": self.classification.to_dict(),
            "known": None if self.known is None else self.known.to_dict(),
        }


def _ortho_subsets(pairs: tuple[tuple[int, int], ...]) -> list[tuple[tuple[int, int], ...]]:
    subsets = []
    for r in range(len(pairs) + 1):
        subsets.extend(combinations(pairs, r))
    return sorted(subsets)


def _candidates(query: AtlasQuery) -> Iterator[tuple[ConstraintProblem, int]]:
    """Counting-feasible candidates in deterministic output order."""
    m_values = list(product(range(query.max_m + 1), repeat=query.k))
    a_values = (
        list(product(range(query.max_a + 1), repeat=query.k))
        if query.allow_affine
        else [(0,) * query.k]
    )
    ortho_subsets = _ortho_subsets(query.universe_pairs())
    lo, hi = query.d_range
    for d in range(lo, hi + 1):
        kd = query.k * d
        for m in m_values:
            for a in a_values:
                for ortho in ortho_subsets:
                    p = ConstraintProblem.of(query.k, m=m, a=a, ortho=ortho)
                    c = constraint_dimension(p)
                    if c > kd:
                        continue  # counting already rules it out
                    if query.mode == "strict" and c != kd:
                        continue
                    yield p, d


def _check_candidate(args) -> Certificate:
    problem, d, mode = args
    return check(problem, d, mode)


def enumerate_rows(query: AtlasQuery, jobs: int = 1) -> Iterator[AtlasRow]:
    """Stream all certified rows matching the query, in output order.

    With jobs > 1 the certificate computations run in a process pool; the
    emitted row order is the same either way.
    """
    lo, hi = query.d_range
    if lo < 1 or hi < lo:
        raise ConfigurationError(f"bad d range {query.d_range}")
    if query.mode not in ("strict", "relaxed"):
        raise ConfigurationError(f"bad mode {query.mode!r}")
    estimate = query.candidate_estimate()
    if estimate > query.candidate_limit:
        raise SearchSpaceError(estimate, query.candidate_limit)

    if jobs > 1:
        todo = list(_candidates(query))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = pool.map(
                _check_candidate,
                [(p, d, query.mode) for p, d in todo],
                chunksize=max(1, len(todo) // (4 * jobs) or 1),
            )
            checked = zip(todo, certs)
            yield from _filtered_rows(query, checked)
        return
    checked = (((p, d), check(p, d, query.mode)) for p, d in _candidates(query))
    yield from _filtered_rows(query, checked)


def _filtered_rows(query: AtlasQuery, checked) -> Iterator[AtlasRow]:
    seen: set[tuple] = set()
    for (p, d), cert in checked:
        if not cert.certified:
            continue
        label = classify(p, d)
        if query.require_optimal and label.optimal is not True:
            continue
        if (
            query.require_maximal_j is not None
            and label.j_maximal < query.require_maximal_j
        ):
            continue
        if query.require_balanced and not label.balanced:
            continue
        key = (p.canonical_key(), d)
        if key in seen:
            continue
        seen.add(key)
        yield AtlasRow(
            problem=p,
            d=d,
            certificate=cert,
            classification=label,
            known=knownvalues.lookup(p),
        )


def _row_cells(row: AtlasRow) -> list[str]:
    p = row.problem
    c = row.classification
    return [
        str(p.k),
        str(row.d),
        "(" + ",".join(map(str, p.m)) + ")",
        "(" + ",".join(map(str, p.a)) + ")",
        ";".join(f"{r}-{s}" for r, s in p.sorted_ortho()),
        ";".join("".join(map(str, b)) for b in p.sorted_extra_bits()),
        str(row.certificate.form_count),
        str(row.certificate.kd),
        row.certificate.mode,
        row.certificate.verdict,
        "" if c.optimal is None else str(c.optimal).lower(),
        str(c.j_maximal),
        str(c.balanced).lower(),
        str(c.tight).lower(),
        row.known_ref() or "",
    ]


def emit_report(rows: Iterable[AtlasRow], fmt: str = "json") -> str:
    """Render rows as a json / csv / markdown document.

    Output is a pure function of the row list, so identical inputs give
    bit-identical documents.
    """
    rows = list(rows)
    if fmt == "json":
        doc = {"schema_version": 1, "rows": [r.to_dict() for r in rows]}
        return json.dumps(doc, sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(_row_cells(row))
        return buf.getvalue()
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(REPORT_COLUMNS) + " |",
            "|" + "|".join(" --- " for _ in REPORT_COLUMNS) + "|",
        ]
        for row in rows:
            lines.append("| " + " | ".join(_row_cells(row)) + " |")
        return "\n".join(lines) + "\n"
    raise ConfigurationError(f"unknown report format {fmt!r}")

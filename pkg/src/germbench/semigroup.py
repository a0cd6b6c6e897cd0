"""Finite inverse semigroups given by multiplication tables.

Elements are dense integer indices ``0..n-1``; labels are kept only for I/O.
A semigroup normally carries a zero. The one exception is a group handed to
:func:`adjoin_zero` / :func:`double_zero_example`, which may be built with
``zero=None`` through :func:`group_from_table` or :func:`cyclic_group`.
"""

from __future__ import annotations

import itertools
import logging
from math import comb, factorial
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    FormatError,
    NoUniqueInverse,
    NotAGroup,
    NotAssociative,
    NotIdempotent,
    SizeGuard,
    ZeroNotAbsorbing,
)
from .partial import PartialBijection, compose_partial

log = logging.getLogger(__name__)

MAX_SEMIGROUP_SIZE = 2000
MAX_SYMMETRIC_N = 5


class InverseSemigroup:
    """A validated finite inverse semigroup.

    Do not call the constructor directly; use :func:`build_from_table` or one
    of the named builders, which validate the table first.
    """

    def __init__(self, labels, table, zero, inv, idempotents, payload=None):
        self.labels: tuple[str, ...] = tuple(labels)
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in table)
        self.zero: int | None = zero
        self.inv: tuple[int, ...] = tuple(inv)
        self.idempotents: tuple[int, ...] = tuple(idempotents)
        # optional concrete realisation of each element (used for I(n))
        self.payload = None if payload is None else tuple(payload)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._idem_set = frozenset(self.idempotents)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"InverseSemigroup(|S|={len(self)}, |E|={len(self.idempotents)}, zero={self.zero_label!r})"

    @property
    def elements(self) -> range:
        return range(len(self.labels))

    @property
    def zero_label(self):
        return None if self.zero is None else self.labels[self.zero]

    @property
    def nonzero_idempotents(self) -> tuple[int, ...]:
        return tuple(e for e in self.idempotents if e != self.zero)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def prod(self, *elements: int) -> int:
        out = elements[0]
        for b in elements[1:]:
            out = self.table[out][b]
        return out

    def star(self, s: int) -> int:
        return self.inv[s]

    def source_idempotent(self, s: int) -> int:
        """s*s, the idempotent whose domain is the domain of s."""
        return self.table[self.inv[s]][s]

    def range_idempotent(self, s: int) -> int:
        """ss*."""
        return self.table[s][self.inv[s]]

    def is_idempotent(self, s: int) -> bool:
        return s in self._idem_set

    def leq(self, e: int, f: int) -> bool:
        return self.table[e][f] == e

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element label {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)


# -- validation -----------------------------------------------------------

def _normalise_table(labels: Sequence, table) -> np.ndarray:
    labels = [str(x) for x in labels]
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise ValueError("duplicate labels")
    n = len(labels)
    out = np.empty((n, n), dtype=np.int64)
    if isinstance(table, Mapping):
        for a, b in itertools.product(labels, repeat=2):
            try:
                out[index[a], index[b]] = index[str(table[(a, b)])]
            except KeyError:
                raise ValueError(f"table not total or refers to unknown label at ({a}, {b})") from None
        return out
    rows = list(table)
    if len(rows) != n:
        raise ValueError(f"table has {len(rows)} rows, expected {n}")
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != n:
            raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            # ints are indices, anything else is a label
            if isinstance(v, (int, np.integer)):
                if not 0 <= v < n:
                    raise ValueError(f"entry {v} out of range")
                out[i, j] = v
            else:
                try:
                    out[i, j] = index[str(v)]
                except KeyError:
                    raise ValueError(f"unknown label {v!r} in row {i}") from None
    return out


def _associativity_witness(A: np.ndarray):
    n = A.shape[0]
    for s in range(n):
        left = A[A[s, :], :]  # (st)u indexed [t, u]
        right = A[s, A]  # s(tu)
        bad = np.argwhere(left != right)
        if bad.size:
            t, u = bad[0]
            return (s, int(t), int(u))
    return None


def _inverse_candidates(A: np.ndarray, s: int) -> np.ndarray:
    n = A.shape[0]
    ar = np.arange(n)
    sts = A[A[s, :], s]
    tst = A[A[:, s], ar]
    return np.flatnonzero((sts == s) & (tst == ar))


def _absorbing(A: np.ndarray, z: int):
    """Return the first element that z fails to absorb, or None."""
    bad = np.flatnonzero((A[z, :] != z) | (A[:, z] != z))
    return None if bad.size == 0 else int(bad[0])


def _with_zero_adjoined(labels: list[str], A: np.ndarray):
    n = A.shape[0]
    new = fresh_zero_label(labels)
    B = np.full((n + 1, n + 1), n, dtype=np.int64)
    B[:n, :n] = A
    return labels + [new], B


def fresh_zero_label(labels: Sequence[str]) -> str:
    taken = set(labels)
    cand = "0"
    while cand in taken:
        cand += "'"
    return cand


def build_from_table(
    labels: Sequence,
    table,
    zero_label=None,
    *,
    require_zero: bool = True,
    max_size: int = MAX_SEMIGROUP_SIZE,
    payload=None,
) -> InverseSemigroup:
    """Validate a multiplication table and return an :class:`InverseSemigroup`.

    ``table`` is either a mapping ``(label, label) -> label`` or a row-major
    nested sequence of labels (or indices). With ``zero_label=None`` an
    absorbing element is searched for, and adjoined when missing.
    Validation is exhaustive: associativity over all triples, uniqueness of
    inverses for every element.
    """
    labels = [str(x) for x in labels]
    if len(labels) > max_size:
        raise SizeGuard(f"|S| = {len(labels)} exceeds the size guard {max_size}")
    A = _normalise_table(labels, table)

    w = _associativity_witness(A)
    if w is not None:
        raise NotAssociative(tuple(labels[i] for i in w))

    zero = None
    if zero_label is not None:
        zero = labels.index(str(zero_label)) if str(zero_label) in labels else None
        if zero is None:
            raise ValueError(f"zero label {zero_label!r} is not an element")
        w = _absorbing(A, zero)
        if w is not None:
            raise ZeroNotAbsorbing(labels[w])
    elif require_zero:
        for z in range(len(labels)):
            if _absorbing(A, z) is None:
                zero = z
                break
        else:
            labels, A = _with_zero_adjoined(labels, A)
            zero = len(labels) - 1
            payload = None
            log.warning("table has no zero element; adjoined %r", labels[zero])

    n = A.shape[0]
    inv = []
    for s in range(n):
        cands = _inverse_candidates(A, s)
        if cands.size != 1:
            raise NoUniqueInverse(labels[s], [labels[c] for c in cands])
        inv.append(int(cands[0]))
    idem = [e for e in range(n) if A[e, e] == e]
    return InverseSemigroup(labels, A.tolist(), zero, inv, idem, payload)


def group_from_table(labels: Sequence, table) -> InverseSemigroup:
    """A finite group as a zero-free inverse semigroup (input for adjoin_zero)."""
    S = build_from_table(labels, table, require_zero=False)
    if len(S.idempotents) != 1:
        raise NotAGroup(f"{len(S.idempotents)} idempotents; a group has exactly one")
    return S


# -- element-level operations ---------------------------------------------

def inverse(S: InverseSemigroup, s: int) -> int:
    return S.inv[s]


def idempotents(S: InverseSemigroup) -> tuple[int, ...]:
    return S.idempotents


def natural_leq(S: InverseSemigroup, e: int, f: int) -> bool:
    """e ⩽ f in the natural order on E, i.e. ef = e."""
    for x in (e, f):
        if not S.is_idempotent(x):
            raise NotIdempotent(f"{S.label(x)!r} is not idempotent")
    return S.leq(e, f)


# -- constructions --------------------------------------------------------

def adjoin_zero(S: InverseSemigroup) -> InverseSemigroup:
    """Adjoin a fresh absorbing element; the old zero (if any) becomes ordinary."""
    labels, B = _with_zero_adjoined(list(S.labels), S.as_array())
    z = len(labels) - 1
    return InverseSemigroup(labels, B.tolist(), z, list(S.inv) + [z], list(S.idempotents) + [z])


def cyclic_group(n: int) -> InverseSemigroup:
    """Z/n written multiplicatively: labels 1, g, g^2, ..."""
    if n < 1:
        raise ValueError("group order must be positive")
    labels = ["1", "g"] + [f"g^{k}" for k in range(2, n)]
    labels = labels[:n]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return group_from_table(labels, table)


def double_zero_example(G: InverseSemigroup) -> InverseSemigroup:
    """G with a zero 0 adjoined, then a further zero 0' adjoined."""
    if len(G.idempotents) != 1:
        raise NotAGroup(f"{len(G.idempotents)} idempotents; a group has exactly one")
    return adjoin_zero(adjoin_zero(G))


def partial_bijections(n: int) -> list[PartialBijection]:
    """Every partial bijection of {0..n-1}, by rank, then domain, then images."""
    out = []
    for k in range(n + 1):
        for dom in itertools.combinations(range(n), k):
            for img in itertools.permutations(range(n), k):
                out.append(PartialBijection(tuple(zip(dom, img))))
    return out


def partial_bijection_label(f: PartialBijection, n: int) -> str:
    """Image word on points 1..n with '-' where undefined; the empty map is '0'."""
    if not f:
        return "0"
    words = [str(f(x) + 1) if x in f else "-" for x in range(n)]
    return ("." if n > 9 else "").join(words)


def symmetric_inverse_monoid(n: int, *, max_n: int = MAX_SYMMETRIC_N) -> InverseSemigroup:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > max_n:
        raise SizeGuard(f"I({n}) exceeds the size guard n <= {max_n}")
    maps = partial_bijections(n)
    index = {f: i for i, f in enumerate(maps)}
    table = [[index[compose_partial(f, g)] for g in maps] for f in maps]
    labels = [partial_bijection_label(f, n) for f in maps]
    return build_from_table(labels, table, labels[0], max_size=max(len(maps), MAX_SEMIGROUP_SIZE), payload=maps)


def symmetric_inverse_monoid_order(n: int) -> int:
    return sum(comb(n, k) ** 2 * factorial(k) for k in range(n + 1))


# -- table files ----------------------------------------------------------

def parse_semigroup(text: str, path=None, *, max_size: int = MAX_SEMIGROUP_SIZE) -> InverseSemigroup:
    """Parse the plain-text table format.

    Line 1: labels. Line 2: zero label, or ``-`` to detect/adjoin one.
    Then one row of labels per element. ``#`` starts a comment line.
    """
    lines = [
        (no, line.split())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if len(lines) < 2:
        raise FormatError("expected a label line and a zero line", path=path)
    (_, labels), (zno, zero) = lines[0], lines[1]
    if len(zero) != 1:
        raise FormatError("zero line must hold exactly one label", zno, path)
    zero_label = None if zero[0] == "-" else zero[0]
    if zero_label is not None and zero_label not in labels:
        raise FormatError(f"zero label {zero_label!r} is not among the labels", zno, path)
    rows = lines[2:]
    if len(rows) != len(labels):
        last = rows[-1][0] if rows else zno
        raise FormatError(f"expected {len(labels)} table rows, found {len(rows)}", last, path)
    known = set(labels)
    for no, row in rows:
        if len(row) != len(labels):
            raise FormatError(f"row has {len(row)} entries, expected {len(labels)}", no, path)
        for v in row:
            if v not in known:
                raise FormatError(f"unknown label {v!r}", no, path)
    return build_from_table(labels, [r for _, r in rows], zero_label, max_size=max_size)


def read_semigroup(path, **kw) -> InverseSemigroup:
    path = Path(path)
    return parse_semigroup(path.read_text(encoding="utf-8"), path=path, **kw)


def format_semigroup(S: InverseSemigroup, comment: str | None = None) -> str:
    width = max(len(x) for x in S.labels)
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(" ".join(S.labels))
    out.append(S.zero_label if S.zero is not None else "-")
    for row in S.table:
        out.append(" ".join(S.labels[v].ljust(width) for v in row).rstrip())
    return "\n".join(out) + "\n"

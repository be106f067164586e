"""(+1, -1) matrix algebra: permanents, equivalence, classification.

Two sign matrices are *equivalent* when one is obtained from the other by
row/column swaps and row/column negations (transpose is deliberately not
an allowed operation).  Equivalence is decided through a canonical form:
the orbit-minimal matrix under the row-major entry order with -1 < +1.

The module also computes the standard equivalence invariants (minus-sign
counts, parity differences, exact rank, |det|, |per|, scalar row Gram)
and classifies square matrices with vanishing permanent.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ParseError, UnsupportedSizeError

PERMANENT_MAX_N = 24
NAIVE_MAX_N = 9
ADDITION_MAX_N = 8
CANONICAL_MAX_SIZE = 5


@dataclass(frozen=True)
class SignMatrix:
    """Immutable r x n matrix with entries +1/-1."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("sign matrix must have at least one row and one column")
        n = len(self.entries[0])
        for row in self.entries:
            if len(row) != n:
                raise ValueError("rows must all have the same length")
            for x in row:
                if x not in (-1, 1):
                    raise ValueError(f"entries must be +1 or -1, got {x!r}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def transpose(self) -> "SignMatrix":
        return SignMatrix(tuple(zip(*self.entries)))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int8)

    def __str__(self) -> str:
        return format_matrix(self)


def sign_matrix(rows: Iterable) -> SignMatrix:
    """Build a SignMatrix from rows of +-1 ints or from strings like '-++'."""
    out = []
    for row in rows:
        if isinstance(row, str):
            out.append(tuple(_char_sign(ch) for ch in row))
        else:
            out.append(tuple(int(x) for x in row))
    return SignMatrix(tuple(out))


def _char_sign(ch: str) -> int:
    if ch == "+":
        return 1
    if ch == "-":
        return -1
    raise ValueError(f"invalid sign character {ch!r}")


# -- text format -----------------------------------------------------------


def format_matrix(m: SignMatrix) -> str:
    """One row per line, '+'/'-' characters, no separators."""
    return "\n".join("".join("+" if x > 0 else "-" for x in row) for row in m.entries)


def parse_matrix_text(text: str) -> SignMatrix:
    rows = []
    width = None
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            if rows:
                break  # blank line terminates a matrix block
            continue
        for col, ch in enumerate(line, start=1):
            if ch not in "+-":
                raise ParseError(f"invalid character {ch!r} in matrix", lineno, col)
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise ParseError(f"row has {len(line)} entries, expected {width}", lineno)
        rows.append(tuple(1 if ch == "+" else -1 for ch in line))
    if not rows:
        raise ParseError("no matrix rows found", lineno or 1)
    return SignMatrix(tuple(rows))


# -- construction from constraint subsets ------------------------------------


def associated_matrix(subsets: Sequence[Iterable[int]], n: int) -> SignMatrix:
    """Row i has -1 exactly at the (1-based) positions listed in subsets[i]."""
    rows = []
    for i, subset in enumerate(subsets):
        s = set(subset)
        for j in s:
            if not 1 <= j <= n:
                raise ValueError(f"subset {i}: index {j} out of range 1..{n}")
        rows.append(tuple(-1 if j in s else 1 for j in range(1, n + 1)))
    return SignMatrix(tuple(rows))


# -- permanents --------------------------------------------------------------


def _ryser_bigint(rows: Sequence[Sequence[int]]) -> int:
    """Gray-code Ryser with Python ints; exact for any size."""
    n = len(rows)
    rowsums = [0] * n
    total = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if (gray >> j) & 1:
            for i in range(n):
                rowsums[i] += rows[i][j]
        else:
            for i in range(n):
                rowsums[i] -= rows[i][j]
        prod = 1
        for v in rowsums:
            prod *= v
            if prod == 0:
                break
        if gray.bit_count() & 1:
            total -= prod
        else:
            total += prod
    return -total if n & 1 else total


def permanent(m: SignMatrix) -> int:
    """Exact permanent via Ryser's inclusion-exclusion with Gray-code updates."""
    if not m.is_square:
        raise ValueError("permanent requires a square matrix")
    n = m.rows
    if n > PERMANENT_MAX_N:
        raise ValueError(f"permanent supports n <= {PERMANENT_MAX_N}")
    if n <= _backend.MAX_INT64_N:
        return int(_backend.ryser_permanent(m.to_numpy()))
    return _ryser_bigint(m.entries)


def permanent_naive(m: SignMatrix) -> int:
    """Permanent by direct sum over all permutations; the small-n oracle."""
    if not m.is_square:
        raise ValueError("permanent requires a square matrix")
    n = m.rows
    if n > NAIVE_MAX_N:
        raise ValueError(f"permanent_naive supports n <= {NAIVE_MAX_N}")
    e = m.entries
    total = 0
    for perm in itertools.permutations(range(n)):
        p = 1
        for i in range(n):
            p *= e[i][perm[i]]
        total += p
    return total


def _permanent_int_rows(rows: Sequence[Sequence[int]]) -> int:
    """Permanent of a small general integer matrix (empty matrix -> 1)."""
    if not rows:
        return 1
    return _ryser_bigint(rows)


def permanent_addition(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> int:
    """per(a + b) evaluated through the expansion over complementary minors.

    Sums per(a[S|T]) * per(b(S|T)) over all index subsets S, T of equal
    size, where a[S|T] keeps rows S / columns T and b(S|T) deletes them;
    the empty minor has permanent 1.  Exact, and equal to the permanent
    of the entrywise sum.
    """
    a = [list(map(int, row)) for row in a]
    b = [list(map(int, row)) for row in b]
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n or any(len(row) != n for row in b):
        raise ValueError("matrices must be square and of equal size")
    if n > ADDITION_MAX_N:
        raise ValueError(f"permanent_addition supports n <= {ADDITION_MAX_N}")
    total = 0
    indices = list(range(n))
    for size in range(n + 1):
        for s in itertools.combinations(indices, size):
            s_rest = [i for i in indices if i not in s]
            for t in itertools.combinations(indices, size):
                t_rest = [j for j in indices if j not in t]
                kept = [[a[i][j] for j in t] for i in s]
                deleted = [[b[i][j] for j in t_rest] for i in s_rest]
                total += _permanent_int_rows(kept) * _permanent_int_rows(deleted)
    return total


# -- exact rank / determinant -------------------------------------------------


def _bareiss(rows: Sequence[Sequence[int]]) -> tuple[int, int | None]:
    """Fraction-free elimination; returns (rank, det) with det only for square input."""
    m = [list(map(int, row)) for row in rows]
    nr = len(m)
    nc = len(m[0])
    prev = 1
    sign = 1
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        piv = next((r for r in range(rank, nr) if m[r][col] != 0), None)
        if piv is None:
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            sign = -sign
        for r in range(rank + 1, nr):
            for c in range(col + 1, nc):
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
    det = None
    if nr == nc:
        det = sign * prev if rank == nr else 0
    return rank, det


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix over the rationals."""
    return _bareiss(rows)[0]


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class InvariantProfile:
    """Equivalence invariants of a sign matrix.

    ``pi_r``/``pi_c`` count rows/columns with an even number of minus
    signs, minus those with an odd number.  For even n, swaps and row
    negations preserve ``pi_r`` while each column negation flips every
    row parity (so only |pi_r| is an orbit invariant, and likewise
    |pi_c|); for odd n not even that holds.  ``abs_det``/``abs_per`` are
    None for non-square matrices.  The profile is sound but not
    complete: equivalence decisions must go through
    :func:`canonical_form`.
    """

    mu: int
    row_minus: tuple[int, ...]
    col_minus: tuple[int, ...]
    pi_r: int
    pi_c: int
    rank: int
    abs_det: int | None
    abs_per: int | None
    row_gram_is_scalar: bool


def _minus_counts(m: SignMatrix) -> tuple[tuple[int, ...], tuple[int, ...]]:
    row_minus = tuple(sum(1 for x in row if x < 0) for row in m.entries)
    col_minus = tuple(sum(1 for row in m.entries if row[j] < 0) for j in range(m.cols))
    return row_minus, col_minus


def _parity_difference(counts: Sequence[int]) -> int:
    even = sum(1 for c in counts if c % 2 == 0)
    return even - (len(counts) - even)


def invariants(m: SignMatrix) -> InvariantProfile:
    row_minus, col_minus = _minus_counts(m)
    rank, det = _bareiss(m.entries)
    abs_per = None
    if m.is_square and m.rows <= PERMANENT_MAX_N:
        abs_per = abs(permanent(m))
    gram_scalar = True
    n = m.cols
    for i, ri in enumerate(m.entries):
        for k, rk in enumerate(m.entries):
            dot = sum(x * y for x, y in zip(ri, rk))
            if dot != (n if i == k else 0):
                gram_scalar = False
                break
        if not gram_scalar:
            break
    return InvariantProfile(
        mu=sum(row_minus),
        row_minus=row_minus,
        col_minus=col_minus,
        pi_r=_parity_difference(row_minus),
        pi_c=_parity_difference(col_minus),
        rank=rank,
        abs_det=abs(det) if det is not None else None,
        abs_per=abs_per,
        row_gram_is_scalar=gram_scalar,
    )


# -- equivalence operations ----------------------------------------------------

OP_KINDS = ("swap-rows", "swap-cols", "negate-row", "negate-col")


@dataclass(frozen=True)
class EquivalenceOp:
    """One generator of the equivalence group; indices are 0-based."""

    kind: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.kind not in OP_KINDS:
            raise ValueError(f"unknown op kind {self.kind!r}")
        if self.kind.startswith("swap") and self.j is None:
            raise ValueError(f"{self.kind} needs two indices")


def apply_op(m: SignMatrix, op: EquivalenceOp) -> SignMatrix:
    rows = [list(row) for row in m.entries]
    if op.kind == "swap-rows":
        _check_index(op.i, m.rows)
        _check_index(op.j, m.rows)
        rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
    elif op.kind == "swap-cols":
        _check_index(op.i, m.cols)
        _check_index(op.j, m.cols)
        for row in rows:
            row[op.i], row[op.j] = row[op.j], row[op.i]
    elif op.kind == "negate-row":
        _check_index(op.i, m.rows)
        rows[op.i] = [-x for x in rows[op.i]]
    else:
        _check_index(op.i, m.cols)
        for row in rows:
            row[op.i] = -row[op.i]
    return SignMatrix(tuple(tuple(row) for row in rows))


def _check_index(i: int | None, bound: int) -> None:
    if i is None or not 0 <= i < bound:
        raise IndexError(f"index {i} out of range 0..{bound - 1}")


# -- canonical form --------------------------------------------------------------


def _canonical_entries(m: SignMatrix) -> tuple[tuple[int, ...], ...]:
    """Orbit-minimal entry tuple under swaps and negations.

    Column permutations and sign patterns are enumerated outright; for a
    fixed column configuration the optimal row operations are forced
    (take the smaller of each row and its negation, then sort rows), so
    the search is n! * 2^n instead of the full orbit.
    """
    entries = m.entries
    r = len(entries)
    n = len(entries[0])
    best = None
    for colperm in itertools.permutations(range(n)):
        permuted = [tuple(row[c] for c in colperm) for row in entries]
        for signs in itertools.product((1, -1), repeat=n):
            rows = []
            for row in permuted:
                srow = tuple(x * s for x, s in zip(row, signs))
                neg = tuple(-x for x in srow)
                rows.append(srow if srow < neg else neg)
            rows.sort()
            cand = tuple(rows)
            if best is None or cand < best:
                best = cand
    return best


def canonical_form(m: SignMatrix, _max_size: int = CANONICAL_MAX_SIZE) -> SignMatrix:
    """Orbit-minimal representative; two matrices are equivalent iff equal forms.

    Matrices are ordered by their row-major entry sequence with -1 < +1.
    Exact mode is bounded at 5 rows/columns; larger inputs raise rather
    than silently approximating.
    """
    if m.rows > _max_size or m.cols > _max_size:
        raise UnsupportedSizeError(
            f"canonical_form exact mode supports at most {_max_size} rows/columns"
        )
    return SignMatrix(_canonical_entries(m))


def equivalent(a: SignMatrix, b: SignMatrix) -> bool:
    """Whether b is reachable from a by row/column swaps and negations."""
    if a.rows != b.rows or a.cols != b.cols:
        return False
    return canonical_form(a).entries == canonical_form(b).entries


# -- minus-sign reduction ---------------------------------------------------------


def mu(m: SignMatrix) -> int:
    return sum(1 for row in m.entries for x in row if x < 0)


def reduce_minus(m: SignMatrix) -> SignMatrix | None:
    """Equivalent matrix with strictly fewer minus signs, when one is available.

    A row or column carrying a strict majority of minus signs is negated
    outright (that always lowers mu).  Otherwise, with half = floor(n/2),
    a reduction via the rows/columns carrying exactly ``half`` minus
    signs is guaranteed once mu >= half*n - (half-1) for odd n, or
    mu >= half*n - half for even n; below that threshold (and with no
    over-weighted line) returns None.
    """
    if not m.is_square:
        raise ValueError("reduce_minus requires a square matrix")
    n = m.rows
    if n < 3:
        raise ValueError("reduce_minus requires n >= 3")
    half = n // 2
    odd = bool(n % 2)
    threshold = half * n - (half - 1) if odd else half * n - half
    total = mu(m)

    row_minus, col_minus = _minus_counts(m)
    for j, c in enumerate(col_minus):
        if 2 * c > n:
            return apply_op(m, EquivalenceOp("negate-col", j))
    for i, c in enumerate(row_minus):
        if 2 * c > n:
            return apply_op(m, EquivalenceOp("negate-row", i))
    if total < threshold:
        return None

    # All rows and columns now carry at most `half` minus signs.
    rows_at_half = [i for i, c in enumerate(row_minus) if c == half]
    cols_at_half = [j for j, c in enumerate(col_minus) if c == half]
    if odd:
        i = rows_at_half[0]
        plus_cols = [j for j in cols_at_half if m.entries[i][j] > 0]
        out = apply_op(m, EquivalenceOp("negate-row", i))
        out = apply_op(out, EquivalenceOp("negate-col", plus_cols[0]))
        out = apply_op(out, EquivalenceOp("negate-col", plus_cols[1]))
    elif total > threshold:
        i = rows_at_half[0]
        j = next(j for j in cols_at_half if m.entries[i][j] > 0)
        out = apply_op(m, EquivalenceOp("negate-row", i))
        out = apply_op(out, EquivalenceOp("negate-col", j))
    else:
        pair = next(
            (
                (i, j)
                for i in rows_at_half
                for j in cols_at_half
                if m.entries[i][j] > 0
            ),
            None,
        )
        if pair is not None:
            out = apply_op(m, EquivalenceOp("negate-row", pair[0]))
            out = apply_op(out, EquivalenceOp("negate-col", pair[1]))
        else:
            out = m
            for i in rows_at_half:
                out = apply_op(out, EquivalenceOp("negate-row", i))
            _, new_cols = _minus_counts(out)
            j = next(
                j for j in range(n) if j not in cols_at_half and new_cols[j] > half
            )
            out = apply_op(out, EquivalenceOp("negate-col", j))
    if mu(out) >= total:
        raise AssertionError("minus-sign reduction failed to decrease mu")
    return out


# -- pattern encoding and classification --------------------------------------------


def encode_pattern(m: SignMatrix) -> int:
    """Pack a square matrix into an int; integer order == canonical entry order."""
    n = m.cols
    p = 0
    for i, row in enumerate(m.entries):
        for j, x in enumerate(row):
            if x > 0:
                p |= 1 << (n * n - 1 - (i * n + j))
    return p


def decode_pattern(p: int, n: int) -> SignMatrix:
    return SignMatrix(
        tuple(
            tuple(1 if (p >> (n * n - 1 - (i * n + j))) & 1 else -1 for j in range(n))
            for i in range(n)
        )
    )


def _orbit(start: int, n: int) -> set[int]:
    """Full equivalence orbit of an encoded n x n pattern (BFS over generators)."""
    nn = n * n
    row_masks = [((1 << n) - 1) << (n * (n - 1 - i)) for i in range(n)]
    col_masks = [sum(1 << (nn - 1 - i * n - j) for i in range(n)) for j in range(n)]

    def neighbors(p: int):
        for i in range(n - 1):  # swap rows i, i+1
            hi, lo = n * (n - 1 - i), n * (n - 2 - i)
            d = ((p >> hi) ^ (p >> lo)) & ((1 << n) - 1)
            yield p ^ ((d << hi) | (d << lo))
        for j in range(n - 1):  # swap cols j, j+1
            d = ((p >> 1) ^ p) & col_masks[j + 1]
            yield p ^ (d | (d << 1))
        for mask in row_masks:
            yield p ^ mask
        for mask in col_masks:
            yield p ^ mask

    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for q in neighbors(p):
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def classify_vanishing(
    n: int, mode: str = "exhaustive", budget: int | None = None
) -> list[SignMatrix]:
    """Canonical representatives of n x n sign matrices with permanent zero.

    ``exhaustive`` sweeps all 2^(n^2) matrices (n <= 4) and is complete:
    it deduplicates by enumerating whole equivalence orbits, so the
    result is the full list of classes.  ``normalized-search`` fixes the
    first row and column to +1 (every class has such a representative,
    by negations alone) and sweeps the remaining (n-1)^2 entries; it is
    complete for existence but not for class counting, and ``budget``
    caps the number of vanishing matrices collected before
    deduplication (None or 0 means no cap).
    """
    if mode == "exhaustive":
        if n > 4:
            raise UnsupportedSizeError("exhaustive classification supports n <= 4")
        patterns = set(int(p) for p in _backend.find_vanishing(n, False))
        reps = []
        while patterns:
            orbit = _orbit(next(iter(patterns)), n)
            reps.append(min(orbit))
            patterns -= orbit
    elif mode == "normalized-search":
        if n > 6:
            raise UnsupportedSizeError("normalized search supports n <= 6")
        found = _backend.find_vanishing(n, True)
        if budget:
            found = found[:budget]
        reps = list(
            {
                encode_pattern(canonical_form(decode_pattern(int(p), n), _max_size=6))
                for p in found
            }
        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return [decode_pattern(p, n) for p in sorted(reps)]

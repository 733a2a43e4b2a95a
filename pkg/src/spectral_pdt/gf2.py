"""Linear algebra over GF(2) on integer bitmasks.

A linear form on F_2^n is an ``int`` mask below ``2**n``.  Variable x_1 is the
most significant bit, so for n=3 the mask ``0b100`` is x_1 and ``0b001`` is x_3.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError

HARD_MAX_N = 24


def max_n() -> int:
    """The variable cap; ``SPECTRAL_PDT_MAX_N`` may lower it, never raise it."""
    raw = os.environ.get("SPECTRAL_PDT_MAX_N")
    if raw is None:
        return HARD_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"SPECTRAL_PDT_MAX_N must be an integer, got {raw!r}")
    return max(1, min(HARD_MAX_N, value))


def check_n(n: int, allow_zero: bool = False) -> None:
    lo = 0 if allow_zero else 1
    if not isinstance(n, int) or not lo <= n <= max_n():
        raise InputError(f"n must be in [{lo}, {max_n()}], got {n!r}")


def parity(v: int) -> int:
    return v.bit_count() & 1


def dot(a: int, b: int) -> int:
    """gamma(x) for gamma=a, x=b: parity of the common bits."""
    return (a & b).bit_count() & 1


def var_mask(i: int, n: int) -> int:
    """Mask of variable x_i (1-based)."""
    if not 1 <= i <= n:
        raise InputError(f"variable x{i} out of range for n={n}")
    return 1 << (n - i)


def form_to_hex(mask: int) -> str:
    return f"{mask:#x}"


def form_from_hex(text: str, n: int) -> int:
    mask = int(text, 16)
    if not 0 <= mask < (1 << n):
        raise InputError(f"form {text} does not fit n={n}")
    return mask


def format_form(mask: int, n: int) -> str:
    return f"n={n}, mask={form_to_hex(mask)}"


@dataclass(frozen=True)
class Gf2Basis:
    """Row-reduced basis of a subspace of the dual space.

    ``rows`` is in reduced row echelon form: leading bits strictly decreasing,
    and every pivot bit is cleared in all other rows.
    """

    rows: tuple[int, ...]
    ambient_n: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(r.bit_length() - 1 for r in self.rows)

    @property
    def pivot_mask(self) -> int:
        m = 0
        for r in self.rows:
            m |= 1 << (r.bit_length() - 1)
        return m

    def reduce(self, v: int) -> tuple[int, int]:
        """Return ``(residual, coords)`` with ``v = residual ^ sum(coords rows)``.

        ``coords`` is MSB-first: row i corresponds to bit ``rank-1-i``.
        The residual has no pivot bits set.
        """
        r = self.rank
        coords = 0
        for i, row in enumerate(self.rows):
            if (v >> (row.bit_length() - 1)) & 1:
                v ^= row
                coords |= 1 << (r - 1 - i)
        return v, coords

    def combine(self, coords: int) -> int:
        """Inverse of the ``coords`` half of :meth:`reduce`."""
        r = self.rank
        v = 0
        for i, row in enumerate(self.rows):
            if (coords >> (r - 1 - i)) & 1:
                v ^= row
        return v

    def span(self) -> list[int]:
        """All 2**rank elements of the span, indexed by coordinate vector."""
        return [self.combine(c) for c in range(1 << self.rank)]

    def with_forms(self, forms: Iterable[int]) -> "Gf2Basis":
        return row_reduce(list(self.rows) + list(forms), self.ambient_n)


def _insert(rows: list[int], v: int) -> bool:
    """Insert v into an RREF row list in place.  Returns False if dependent."""
    for row in rows:
        if (v >> (row.bit_length() - 1)) & 1:
            v ^= row
    if v == 0:
        return False
    p = v.bit_length() - 1
    for i, row in enumerate(rows):
        if (row >> p) & 1:
            rows[i] = row ^ v
    rows.append(v)
    rows.sort(reverse=True)
    return True


def row_reduce(forms: Iterable[int], n: int) -> Gf2Basis:
    check_n(n, allow_zero=True)
    limit = 1 << n
    rows: list[int] = []
    for v in forms:
        if not 0 <= v < limit:
            raise InputError(f"form {v:#x} does not fit n={n}")
        if len(rows) < n:
            _insert(rows, v)
    return Gf2Basis(tuple(rows), n)


def rank(forms: Iterable[int], n: int) -> int:
    return row_reduce(forms, n).rank


def in_span(v: int, basis: Gf2Basis) -> bool:
    if not 0 <= v < (1 << basis.ambient_n):
        raise InputError(f"form {v:#x} does not fit n={basis.ambient_n}")
    return basis.reduce(v)[0] == 0


def coset_partition(support: Iterable[int], basis: Gf2Basis) -> list[tuple[int, frozenset[int]]]:
    """Group forms into cosets of span(basis).

    Each class is reported as ``(representative, members)`` where the
    representative is the smallest mask in the class.  Classes are ordered by
    representative.
    """
    classes: dict[int, set[int]] = {}
    for v in support:
        classes.setdefault(basis.reduce(v)[0], set()).add(v)
    out = [(min(members), frozenset(members)) for members in classes.values()]
    out.sort()
    return out


def extend_to_full_basis(basis: Gf2Basis) -> list[int]:
    """Complete ``basis`` to a basis of all forms using unit vectors.

    Returns a list whose first ``basis.rank`` entries are ``basis.rows``; the
    remaining entries are the unit masks at the non-pivot positions, highest
    first.  The list itself is generally not in echelon form.
    """
    n = basis.ambient_n
    pm = basis.pivot_mask
    extra = [1 << p for p in range(n - 1, -1, -1) if not (pm >> p) & 1]
    return list(basis.rows) + extra


def solve_affine_point(constraints: Sequence[tuple[int, int]], n: int) -> int | None:
    """Find x with gamma(x) = b for every (gamma, b), free variables set to 0.

    Returns None when the system is inconsistent.
    """
    rows: list[tuple[int, int]] = []  # augmented RREF rows (form, value)
    for form, value in constraints:
        if not 0 <= form < (1 << n):
            raise InputError(f"form {form:#x} does not fit n={n}")
        value &= 1
        for r, rv in rows:
            if (form >> (r.bit_length() - 1)) & 1:
                form ^= r
                value ^= rv
        if form == 0:
            if value:
                return None
            continue
        p = form.bit_length() - 1
        rows = [(r ^ form, rv ^ value) if (r >> p) & 1 else (r, rv) for r, rv in rows]
        rows.append((form, value))
    x = 0
    for r, rv in rows:
        if rv:
            x |= 1 << (r.bit_length() - 1)
    return x


def annihilator(basis: Gf2Basis) -> Gf2Basis:
    """The forms gamma with dot(gamma, v) = 0 for every v in span(basis).

    Here ``basis`` is read as a set of vectors in F_2^n rather than forms.
    """
    n = basis.ambient_n
    pm = basis.pivot_mask
    out = []
    for q in range(n):
        if (pm >> q) & 1:
            continue
        g = 1 << q
        for row in basis.rows:
            if (row >> q) & 1:
                g |= 1 << (row.bit_length() - 1)
        out.append(g)
    return row_reduce(out, n)

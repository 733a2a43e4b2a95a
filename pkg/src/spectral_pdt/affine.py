"""Affine subspaces, coset buckets and restricted spectra.

Fix a row-reduced set Gamma of linear forms g_1..g_r and an assignment b
(an r-bit int, row i at bit r-1-i).  On V_b = {x : g_i(x) = b_i} characters
whose masks differ by an element of span(Gamma) agree up to sign, so the
support of f splits into cosets ("buckets").  Bucket j contributes the single
coefficient P_j(b) = sum_m c_m * (-1)^<alpha_m, b> to the restriction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .errors import EmptyPolynomialError, InconsistentConstraints, InputError
from .gf2 import Gf2Basis
from .spectrum import BooleanFunction, Spectrum, fwht, parity_bits

# cap on bucket-count * 2^rank entries materialised at once
_BLOCK_ENTRIES = 1 << 22


@dataclass(frozen=True)
class AffineSubspace:
    """{x : form(x) = value for every constraint}, kept in RREF."""

    constraints: tuple[tuple[int, int], ...]
    ambient_n: int

    @classmethod
    def from_constraints(cls, pairs: Iterable[tuple[int, int]], n: int) -> "AffineSubspace":
        rows: list[tuple[int, int]] = []
        for form, value in pairs:
            if not 0 <= form < (1 << n):
                raise InputError(f"form {form:#x} does not fit n={n}")
            value &= 1
            for r, rv in rows:
                if (form >> (r.bit_length() - 1)) & 1:
                    form ^= r
                    value ^= rv
            if form == 0:
                if value:
                    raise InconsistentConstraints("constraints have no common solution")
                continue
            p = form.bit_length() - 1
            rows = [(r ^ form, rv ^ value) if (r >> p) & 1 else (r, rv) for r, rv in rows]
            rows.append((form, value))
            rows.sort(reverse=True)
        return cls(tuple(rows), n)

    @classmethod
    def whole(cls, n: int) -> "AffineSubspace":
        return cls((), n)

    @property
    def basis(self) -> Gf2Basis:
        return Gf2Basis(tuple(f for f, _ in self.constraints), self.ambient_n)

    @property
    def codim(self) -> int:
        return len(self.constraints)

    @property
    def assignment(self) -> int:
        """The constraint values packed as b for :attr:`basis`."""
        r = self.codim
        b = 0
        for i, (_, v) in enumerate(self.constraints):
            b |= v << (r - 1 - i)
        return b

    def point(self) -> int:
        x = 0
        for form, value in self.constraints:
            if value:
                x |= 1 << (form.bit_length() - 1)
        return x

    def contains(self, x: int) -> bool:
        return all(gf2.dot(f, x) == v for f, v in self.constraints)

    def to_json(self) -> list[dict]:
        return [{"form_hex": gf2.form_to_hex(f), "value": v} for f, v in self.constraints]

    @classmethod
    def from_json(cls, data: list[dict], n: int) -> "AffineSubspace":
        return cls.from_constraints(
            ((gf2.form_from_hex(e["form_hex"], n), int(e["value"])) for e in data), n
        )


@dataclass(frozen=True)
class Member:
    alpha: int          # support element XOR bucket rep; lies in span(Gamma)
    alpha_coords: int   # alpha in Gamma coordinates
    coeff: int


@dataclass(frozen=True)
class Bucket:
    rep: int            # smallest support element of the coset
    rep_coords: int     # rep = residual ^ combine(rep_coords)
    residual: int       # pivot-free representative of the coset
    members: tuple[Member, ...]

    @property
    def k(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CosetDecomposition:
    gamma: Gf2Basis
    buckets: tuple[Bucket, ...]

    @property
    def l(self) -> int:
        return len(self.buckets)

    @property
    def s(self) -> int:
        return sum(b.k for b in self.buckets)

    def member_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(bucket index, full Gamma-coords, coeff) for every support element."""
        idx, coords, coeffs = [], [], []
        for j, bucket in enumerate(self.buckets):
            for m in bucket.members:
                idx.append(j)
                coords.append(m.alpha_coords ^ bucket.rep_coords)
                coeffs.append(m.coeff)
        return (np.array(idx, dtype=np.int64), np.array(coords, dtype=np.int64),
                np.array(coeffs, dtype=np.int64))


def decompose(sp: Spectrum, gamma: Gf2Basis) -> CosetDecomposition:
    if not sp.coeffs:
        raise InputError("cannot decompose the zero spectrum")
    groups: dict[int, list[tuple[int, int, int]]] = {}
    for mask, c in sp.items():
        residual, coords = gamma.reduce(mask)
        groups.setdefault(residual, []).append((mask, coords, c))
    buckets = []
    for residual, items in groups.items():
        rep, rep_coords, _ = min(items)
        members = tuple(
            Member(mask ^ rep, coords ^ rep_coords, c) for mask, coords, c in items
        )
        buckets.append(Bucket(rep, rep_coords, residual, members))
    buckets.sort(key=lambda bk: bk.rep)
    return CosetDecomposition(gamma, tuple(buckets))


def _sign(coords: int, b: int) -> int:
    return -1 if (coords & b).bit_count() & 1 else 1


def eval_bucket(bucket: Bucket, b: int) -> int:
    """P_j(b): the scaled coefficient of chi_rep in the restriction to V_b."""
    return sum(m.coeff * _sign(m.alpha_coords, b) for m in bucket.members)


def leaf_spectrum(dec: CosetDecomposition, b: int) -> Spectrum:
    """Spectrum of f restricted to V_b, at the ambient scale 2^n.

    Each surviving coset is keyed by its pivot-free residual, so the result is
    the spectrum of a genuine +/-1 function on F_2^n (constant along Gamma's
    pivot coordinates) that agrees with f on V_b.  The span(Gamma) coset lands
    on mask 0.
    """
    if not 0 <= b < (1 << dec.gamma.rank):
        raise InputError(f"assignment {b} needs {dec.gamma.rank} bits")
    out = {}
    for bucket in dec.buckets:
        v = eval_bucket(bucket, b) * _sign(bucket.rep_coords, b)
        if v:
            out[bucket.residual] = v
    return Spectrum(dec.gamma.ambient_n, out)


def all_leaf_values(dec: CosetDecomposition, j_lo: int = 0, j_hi: int | None = None) -> np.ndarray:
    """Canonical leaf coefficients for buckets j_lo..j_hi at every b.

    Row j, column b equals ``leaf_spectrum(dec, b)[bucket j residual]``.
    """
    j_hi = dec.l if j_hi is None else j_hi
    size = 1 << dec.gamma.rank
    dense = np.zeros((j_hi - j_lo, size), dtype=np.int64)
    for j in range(j_lo, j_hi):
        bucket = dec.buckets[j]
        for m in bucket.members:
            dense[j - j_lo, m.alpha_coords ^ bucket.rep_coords] += m.coeff
    return fwht(dense)


def leaf_profile(dec: CosetDecomposition) -> tuple[np.ndarray, np.ndarray]:
    """For every assignment b: (leaf sparsity, whether the leaf is constant)."""
    size = 1 << dec.gamma.rank
    counts = np.zeros(size, dtype=np.int64)
    nonconst = np.zeros(size, dtype=np.int64)
    block = max(1, _BLOCK_ENTRIES // size)
    for lo in range(0, dec.l, block):
        hi = min(dec.l, lo + block)
        nz = all_leaf_values(dec, lo, hi) != 0
        counts += nz.sum(axis=0)
        for j in range(lo, hi):
            if dec.buckets[j].residual != 0:
                nonconst += nz[j - lo]
    return counts, nonconst == 0


def sampled_leaf_profile(dec: CosetDecomposition, bs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Same as :func:`leaf_profile` but only at the assignments ``bs``."""
    idx, coords, coeffs = dec.member_arrays()
    bs = np.asarray(bs, dtype=np.int64)
    counts = np.zeros(len(bs), dtype=np.int64)
    nonconst = np.zeros(len(bs), dtype=np.int64)
    is_span = np.array([bk.residual == 0 for bk in dec.buckets])
    chunk = max(1, _BLOCK_ENTRIES // max(1, len(idx)))
    for lo in range(0, len(bs), chunk):
        part = bs[lo:lo + chunk]
        signs = 1 - 2 * parity_bits(coords[:, None], part[None, :])
        vals = np.zeros((dec.l, len(part)), dtype=np.int64)
        np.add.at(vals, idx, coeffs[:, None] * signs)
        nz = vals != 0
        counts[lo:lo + chunk] = nz.sum(axis=0)
        nonconst[lo:lo + chunk] = nz[~is_span].sum(axis=0)
    return counts, nonconst == 0


def materialize(f: BooleanFunction, V: AffineSubspace) -> BooleanFunction:
    """f restricted to V as a function of the n - codim free coordinates.

    The constraint basis is completed with unit forms at its non-pivot
    positions (see :func:`gf2.extend_to_full_basis`); the free coordinates
    y are the values of those unit forms, highest position first.  Under the
    inverse of that change of basis a point of V is fixed by y alone.
    """
    n = f.n
    if V.ambient_n != n:
        raise InputError("subspace and function live in different dimensions")
    r = V.codim
    full = gf2.extend_to_full_basis(V.basis)
    free_positions = [u.bit_length() - 1 for u in full[r:]]
    m = n - r
    ys = np.arange(1 << m, dtype=np.int64)
    x = np.zeros_like(ys)
    for k, q in enumerate(free_positions):
        x |= ((ys >> (m - 1 - k)) & 1) << q
    pivots = np.zeros_like(ys)
    for form, value in V.constraints:
        p = form.bit_length() - 1
        pivots |= (parity_bits(form, x) ^ value) << p
    x |= pivots
    return BooleanFunction.from_bits(f.bits()[x], m)


def project_to_support_span(sp: Spectrum) -> tuple[Gf2Basis, Spectrum]:
    """Rewrite sp as a function of a basis t_1..t_d of span(Supp).

    Returns ``(basis, g)`` where g lives on d variables with
    g(z) = f(x) whenever (t_1(x), ..., t_d(x)) = z.  The mask of g at
    coordinates c corresponds to the ambient mask ``basis.combine(c)``.
    """
    basis = gf2.row_reduce(sp.coeffs, sp.n)
    d = basis.rank
    shift = sp.n - d
    out = {}
    for mask, c in sp.items():
        _, coords = basis.reduce(mask)
        if c % (1 << shift):
            raise InputError("coefficients are not from a Boolean function")
        out[coords] = c >> shift if c > 0 else -((-c) >> shift)
    return basis, Spectrum(d, out)


def lift_constraints(pairs: Iterable[tuple[int, int]], basis: Gf2Basis) -> list[tuple[int, int]]:
    """Map constraints on support coordinates back to ambient forms."""
    return [(basis.combine(form), value) for form, value in pairs]


def restrict_spectrum(sp: Spectrum, V: AffineSubspace) -> Spectrum:
    """Canonical leaf spectrum of sp on V."""
    return leaf_spectrum(decompose(sp, V.basis), V.assignment)


def nonzero_fraction(poly: Sequence[tuple[int, int]], m: int) -> Fraction:
    """Fraction of x in {+1,-1}^m where sum c * prod_{i in mask} x_i != 0.

    Evaluates the polynomial at every point with one dense transform.
    """
    gf2.check_n(m, allow_zero=True)
    if m > 20:
        raise InputError("m must be at most 20")
    dense = np.zeros(1 << m, dtype=np.int64)
    for mask, c in poly:
        if not 0 <= mask < (1 << m):
            raise InputError(f"monomial {mask:#x} does not fit m={m}")
        dense[mask] += c
    if not dense.any():
        raise EmptyPolynomialError("polynomial is identically zero")
    values = fwht(dense)
    return Fraction(int(np.count_nonzero(values)), 1 << m)


def poly_sparsity(poly: Sequence[tuple[int, int]]) -> int:
    acc: dict[int, int] = {}
    for mask, c in poly:
        acc[mask] = acc.get(mask, 0) + c
    return sum(1 for c in acc.values() if c)

"""Non-adaptive parity decision trees.

``build_optimal_nadt`` queries a basis of span(Supp f), which always
determines f.  ``run_procedure`` builds a tree level by level: while the
number l of cosets of span(Gamma) meeting Supp(f) exceeds tau, it takes the
leaf with the largest Fourier support, finds parities that make that leaf
constant, and queries them at every leaf.  Once l <= tau, one representative
of each remaining coset is queried.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import gf2
from .affine import (AffineSubspace, decompose, leaf_profile, leaf_spectrum,
                     lift_constraints, project_to_support_span, restrict_spectrum,
                     sampled_leaf_profile)
from .constant_subspace import exact_min_codim, greedy_constant_subspace
from .errors import DimensionTooLargeError, InvalidTauError, InvariantError, InputError
from .gf2 import Gf2Basis
from .spectrum import BooleanFunction, Spectrum, dimension, inverse_wht, parity_bits, sparsity, wht

DENSE_TABLE_MAX_RANK = 20
EXHAUSTIVE_VERIFY_MAX_N = 16
RANDOM_VERIFY_POINTS = 100_000

# finder(leaf spectrum) -> ambient constraints making the leaf constant
Finder = Callable[[Spectrum], Sequence[tuple[int, int]]]


def greedy_finder(leaf: Spectrum) -> list[tuple[int, int]]:
    return list(greedy_constant_subspace(leaf).subspace.constraints)


def exact_finder(leaf: Spectrum) -> list[tuple[int, int]]:
    basis, g = project_to_support_span(leaf)
    result = exact_min_codim(inverse_wht(g))
    return lift_constraints(result.subspace.constraints, basis)


FINDERS: dict[str, Finder] = {"greedy": greedy_finder, "exact": exact_finder}


@dataclass(frozen=True)
class Selector:
    mode: str = "EXHAUSTIVE"  # or "SAMPLED"
    samples: int = 0
    seed: int = 0

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "Selector":
        if text == "exhaustive":
            return cls()
        if text.startswith("sampled:"):
            try:
                count = int(text.split(":", 1)[1])
            except ValueError:
                count = 0
            if count < 1:
                raise InputError(f"bad sample count in {text!r}")
            return cls("SAMPLED", count, seed)
        raise InputError(f"unknown selector {text!r}")


@dataclass(frozen=True)
class NadtCertificate:
    n: int
    queried: tuple[int, ...]
    queried_basis: Gf2Basis
    # bit a of the table is f on the leaf whose basis assignment is a
    decision_table: bytes | None

    @property
    def depth(self) -> int:
        return self.queried_basis.rank

    def decide(self, f: BooleanFunction, a: int) -> int:
        if self.decision_table is not None:
            return -1 if (self.decision_table[a >> 3] >> (7 - (a & 7))) & 1 else 1
        x = _leaf_points(self.queried_basis, np.array([a], dtype=np.int64))[0]
        return f(int(x))

    def table_bits(self) -> str:
        if self.decision_table is None:
            return ""
        bits = np.unpackbits(np.frombuffer(self.decision_table, dtype=np.uint8))
        return "".join("1" if b else "0" for b in bits[: 1 << self.depth])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "queried": [gf2.form_to_hex(g) for g in self.queried],
            "queried_basis": [gf2.form_to_hex(g) for g in self.queried_basis.rows],
            "table": self.table_bits(),
        }


@dataclass(frozen=True)
class IterationRecord:
    i: int
    l_before: int
    l_after: int
    codim_added: int
    chosen_leaf_sparsity: int
    selection_mode: str
    chosen_leaf: int
    # SAMPLED only: did the kept leaf reach ceil(l^2 / s)?
    meets_support_bound: bool = True


@dataclass(frozen=True)
class ProcedureTrace:
    s: int
    tau: int
    iterations: tuple[IterationRecord, ...]
    final_coset_queries: int
    total_depth: int
    finder: str = "greedy"

    @property
    def t(self) -> int:
        return len(self.iterations)

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "tau": self.tau,
            "finder": self.finder,
            "iterations": [asdict(r) for r in self.iterations],
            "final_coset_queries": self.final_coset_queries,
            "total_depth": self.total_depth,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "l_before", "l_after", "codim_added", "chosen_leaf_sparsity", "mode"])
        for r in self.iterations:
            w.writerow([r.i, r.l_before, r.l_after, r.codim_added, r.chosen_leaf_sparsity, r.selection_mode])
        return buf.getvalue()


def _leaf_points(basis: Gf2Basis, assignments: np.ndarray) -> np.ndarray:
    """One point of each leaf: pivot bits from a, everything else zero."""
    r = basis.rank
    x = np.zeros_like(assignments)
    for i, p in enumerate(basis.pivots):
        x |= ((assignments >> (r - 1 - i)) & 1) << p
    return x


def _decision_table(f: BooleanFunction, basis: Gf2Basis) -> bytes | None:
    r = basis.rank
    if r > DENSE_TABLE_MAX_RANK:
        return None
    a = np.arange(1 << r, dtype=np.int64)
    x = _leaf_points(basis, a)
    bits = f.bits()
    values = bits[x]
    free = ~basis.pivot_mask & ((1 << f.n) - 1)
    if free:
        # second point of every leaf: flip the lowest free bit, repair pivots
        q = free & -free
        shift = 0
        for row in basis.rows:
            if row & q:
                shift |= 1 << (row.bit_length() - 1)
        if not np.array_equal(values, bits[x ^ (q | shift)]):
            raise InvariantError("queried forms do not determine f")
    return np.packbits(values).tobytes()


def _certificate(f: BooleanFunction, queried: Sequence[int]) -> NadtCertificate:
    basis = gf2.row_reduce(queried, f.n)
    return NadtCertificate(f.n, tuple(queried), basis, _decision_table(f, basis))


def build_optimal_nadt(f: BooleanFunction) -> NadtCertificate:
    sp = wht(f)
    basis = gf2.row_reduce(sp.coeffs, f.n)
    return NadtCertificate(f.n, basis.rows, basis, _decision_table(f, basis))


def verify_certificate(f: BooleanFunction, cert: NadtCertificate, seed: int = 0) -> bool:
    basis = cert.queried_basis
    if cert.n != f.n or basis.ambient_n != f.n:
        return False
    if any(not gf2.in_span(g, basis) for g in wht(f).coeffs):
        return False
    if f.n <= EXHAUSTIVE_VERIFY_MAX_N:
        xs = np.arange(f.size, dtype=np.int64)
    else:
        xs = np.random.default_rng(seed).integers(0, f.size, RANDOM_VERIFY_POINTS, dtype=np.int64)
    r = basis.rank
    a = np.zeros_like(xs)
    for i, row in enumerate(basis.rows):
        a |= parity_bits(row, xs) << (r - 1 - i)
    expected = f.bits()[xs]
    if cert.decision_table is not None:
        if len(cert.decision_table) * 8 < (1 << r):
            return False
        table = np.unpackbits(np.frombuffer(cert.decision_table, dtype=np.uint8))
        got = table[a]
    else:
        got = f.bits()[_leaf_points(basis, a)]
    return bool(np.array_equal(got, expected))


def brute_force_min_nadt(f: BooleanFunction) -> int:
    """Smallest t such that some t parities determine f, by exhaustion."""
    if f.n > 4:
        raise DimensionTooLargeError("brute force is limited to n <= 4")
    from itertools import combinations

    xs = np.arange(f.size, dtype=np.int64)
    bits = f.bits()
    forms = range(1, f.size)
    for t in range(f.n + 1):
        for combo in combinations(forms, t):
            key = np.zeros_like(xs)
            for row in combo:
                key = (key << 1) | parity_bits(row, xs)
            seen_minus = np.zeros(1 << t, dtype=bool)
            seen_plus = np.zeros(1 << t, dtype=bool)
            seen_minus[key[bits == 1]] = True
            seen_plus[key[bits == 0]] = True
            if not np.any(seen_minus & seen_plus):
                return t
    raise InvariantError("n parities always determine f")


def _select_leaf(dec, s: int, selector: Selector, rng) -> tuple[int, int, bool]:
    """Return (b, sparsity, meets_support_bound) of the leaf to make constant."""
    l = dec.l
    need = -(-l * l // s)
    rank = dec.gamma.rank
    if selector.mode == "EXHAUSTIVE":
        counts, constant = leaf_profile(dec)
        bs = np.arange(1 << rank, dtype=np.int64)
    else:
        bs = rng.integers(0, 1 << rank, selector.samples, dtype=np.int64) if rank else np.zeros(1, np.int64)
        counts, constant = sampled_leaf_profile(dec, bs)
    # largest sparsity, then non-constant, then smallest b
    order = np.lexsort((bs, constant, -counts))
    best = int(order[0])
    if constant[best]:
        if selector.mode == "EXHAUSTIVE":
            raise InvariantError("every leaf is constant while l > tau")
        # fall back to the first non-constant leaf in b order
        for b in range(1 << rank):
            cand = leaf_spectrum(dec, b)
            if not cand.is_constant():
                return b, len(cand), len(cand) >= need
        raise InvariantError("every leaf is constant while l > tau")
    return int(bs[best]), int(counts[best]), int(counts[best]) >= need


def run_procedure(f: BooleanFunction, tau: int, finder: str | Finder = "greedy",
                  selector: Selector | None = None) -> tuple[NadtCertificate, ProcedureTrace]:
    if not isinstance(tau, int) or tau < 1:
        raise InvalidTauError(f"tau must be a positive integer, got {tau!r}")
    selector = selector or Selector()
    find = FINDERS[finder] if isinstance(finder, str) else finder
    finder_name = finder if isinstance(finder, str) else getattr(finder, "__name__", "custom")
    rng = np.random.default_rng(selector.seed)

    sp = wht(f)
    s = sparsity(sp)
    gamma = Gf2Basis((), f.n)
    queried: list[int] = []
    dec = decompose(sp, gamma)
    records = []
    while dec.l > tau:
        b, chosen, meets = _select_leaf(dec, s, selector, rng)
        leaf = leaf_spectrum(dec, b)
        constraints = list(find(leaf))
        if not restrict_spectrum(leaf, AffineSubspace.from_constraints(constraints, f.n)).is_constant():
            raise InvariantError("finder returned a subspace on which the leaf is not constant")
        new_gamma = gamma.with_forms(form for form, _ in constraints)
        added = new_gamma.rank - gamma.rank
        if added == 0:
            raise InvariantError("finder added no independent parity")
        for form, _ in constraints:
            if not gf2.in_span(form, gf2.row_reduce(queried, f.n)):
                queried.append(form)
        l_before = dec.l
        gamma = new_gamma
        dec = decompose(sp, gamma)
        records.append(IterationRecord(len(records) + 1, l_before, dec.l, added, chosen,
                                       selector.mode, b, meets))
    final = 0
    for bucket in dec.buckets:
        if bucket.residual != 0:
            final += 1
            if not gf2.in_span(bucket.rep, gf2.row_reduce(queried, f.n)):
                queried.append(bucket.rep)
    cert = _certificate(f, queried)
    trace = ProcedureTrace(s, tau, tuple(records), final, cert.depth, finder_name)
    return cert, trace


@dataclass(frozen=True)
class LemmaMargins:
    """Integer slack of each inequality at one iteration; >= 0 means it holds."""

    i: int
    support: int     # chosen * s - l_before^2
    reduction: int   # 2 (l_before - l_after) s - (l_before^2 - s)
    final: int | None  # 4 s - i * l_after, only when tau^2 >= 2 s
    checked: bool    # False for sampled iterations below the support bound


def lemma_margins(trace: ProcedureTrace) -> list[LemmaMargins]:
    s = trace.s
    final_applies = trace.tau * trace.tau >= 2 * s
    out = []
    for r in trace.iterations:
        out.append(LemmaMargins(
            r.i,
            r.chosen_leaf_sparsity * s - r.l_before * r.l_before,
            2 * (r.l_before - r.l_after) * s - (r.l_before * r.l_before - s),
            4 * s - r.i * r.l_after if final_applies else None,
            r.selection_mode == "EXHAUSTIVE" or r.meets_support_bound,
        ))
    return out


def assert_lemmas(trace: ProcedureTrace) -> list[str]:
    """Hard violations of the support, reduction and final-count bounds."""
    violations = []
    for m, r in zip(lemma_margins(trace), trace.iterations):
        exhaustive = r.selection_mode == "EXHAUSTIVE"
        if m.checked and m.support < 0:
            violations.append(f"iteration {m.i}: leaf sparsity {r.chosen_leaf_sparsity} < l^2/s "
                              f"with l={r.l_before}, s={trace.s}")
        if m.checked and m.reduction < 0:
            violations.append(f"iteration {m.i}: l fell {r.l_before}->{r.l_after}, less than "
                              f"(l^2/s - 1)/2 with s={trace.s}")
        if exhaustive and m.final is not None and m.final < 0:
            violations.append(f"iteration {m.i}: i*l = {m.i * r.l_after} > 4s = {4 * trace.s}")
    return violations


@dataclass(frozen=True)
class DepthReport:
    depth: int
    dim: int
    s: int
    ratio_depth_to_s23: float
    ratio_depth_to_sqrt_s: float

    def to_json(self) -> dict:
        return asdict(self)


def depth_bound_report(f: BooleanFunction, trace: ProcedureTrace) -> DepthReport:
    sp = wht(f)
    d = dimension(sp)
    s = sparsity(sp)
    depth = trace.total_depth
    if depth < d:
        raise InvariantError(f"depth {depth} below dimension {d}")
    if depth > s:
        raise InvariantError(f"depth {depth} above sparsity {s}")
    return DepthReport(depth, d, s, depth / s ** (2 / 3), depth / math.sqrt(s))


def ceil_s23(s: int) -> int:
    """Least m with m^3 >= s^2."""
    target = s * s
    m = max(0, round(s ** (2 / 3)) - 2)
    while m ** 3 < target:
        m += 1
    while m > 0 and (m - 1) ** 3 >= target:
        m -= 1
    return m


def ceil_sqrt(v: int) -> int:
    r = math.isqrt(v)
    return r if r * r == v else r + 1


def resolve_tau(spec: str | int, s: int) -> int:
    """``s23`` -> ceil(s^(2/3)), ``2sqrt`` -> ceil(2 sqrt s), ``sqrt2s`` -> ceil(sqrt(2s))."""
    if isinstance(spec, int):
        value = spec
    elif spec == "s23":
        value = ceil_s23(s)
    elif spec == "2sqrt":
        value = ceil_sqrt(4 * s)
    elif spec == "sqrt2s":
        value = ceil_sqrt(2 * s)
    else:
        try:
            value = int(spec)
        except ValueError:
            raise InvalidTauError(f"tau must be an integer, 's23', '2sqrt' or 'sqrt2s', got {spec!r}")
    if value < 1:
        raise InvalidTauError(f"tau must be >= 1, got {value}")
    return value

"""Affine subspaces on which a Boolean function is constant.

Two strategies:

* ``GREEDY_MERGE`` repeatedly pins the parity that identifies the two
  heaviest surviving characters, with the sign that makes their coefficients
  add.  Cheap, works at any n, no optimality claim.
* ``EXACT_MIN`` finds a minimum co-dimension constant subspace by searching
  for the largest affine subspace inside one level set.  Exponential; meant
  for n up to about 12.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .affine import AffineSubspace, restrict_spectrum
from .errors import InputError, InvariantError, NotFoundError
from .spectrum import BooleanFunction, Spectrum, evaluate


class Strategy(str, enum.Enum):
    GREEDY_MERGE = "GREEDY_MERGE"
    EXACT_MIN = "EXACT_MIN"


@dataclass(frozen=True)
class ConstantSubspaceResult:
    subspace: AffineSubspace
    constant_value: int
    codim: int
    strategy: Strategy
    # support size of the working spectrum before each greedy step, then final
    sparsity_trace: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "n": self.subspace.ambient_n,
            "strategy": self.strategy.value,
            "codim": self.codim,
            "constant_value": self.constant_value,
            "subspace": self.subspace.to_json(),
        }


def _constant_sign(sp: Spectrum) -> int:
    return 1 if sp[0] > 0 else -1


def _merge_candidates(ranked):
    """Constraints (delta, value) in preference order; heaviest pair first."""
    if len(ranked) == 1:
        # pin chi_gamma = +1, leaving the constant sign(c)
        yield ranked[0][0], 0
        return
    for a in range(len(ranked)):
        for b in range(a + 1, len(ranked)):
            (g1, c1), (g2, c2) = ranked[a], ranked[b]
            # on chi_delta = eps: c1 chi_1 + c2 chi_2 = (c1 + eps c2) chi_1
            yield g1 ^ g2, 0 if (c1 > 0) == (c2 > 0) else 1


def greedy_constant_subspace(sp: Spectrum) -> ConstantSubspaceResult:
    n = sp.n
    pairs: list[tuple[int, int]] = []
    V = AffineSubspace.whole(n)
    work = sp
    trace = [len(work)]
    while not work.is_constant():
        ranked = sorted(work.items(), key=lambda mc: (-abs(mc[1]), mc[0]))
        basis = V.basis
        for form, value in _merge_candidates(ranked):
            if not gf2.in_span(form, basis):
                break
        else:
            raise InvariantError("no independent merge available on a non-constant leaf")
        pairs.append((form, value))
        V = AffineSubspace.from_constraints(pairs, n)
        work = restrict_spectrum(sp, V)
        if len(work) >= trace[-1] and not (trace[-1] == 1 and work.is_constant()):
            raise InvariantError("greedy step did not shrink the support")
        trace.append(len(work))
    return ConstantSubspaceResult(V, _constant_sign(work), V.codim, Strategy.GREEDY_MERGE, tuple(trace))


def _find_cube(level: np.ndarray, n: int, x0: int, k: int):
    """Directions of a k-dim affine subspace through x0 inside ``level``.

    Directions are added in increasing pivot order, each cleared at the
    earlier pivots, and x0 must be zero at every pivot; every affine subspace
    therefore has exactly one representation.
    """
    start = np.array([x0], dtype=np.int64)

    def grow(pts, dirs, top, pivots):
        need = k - len(dirs)
        if need == 0:
            return list(dirs)
        for p in range(top + 1, n):
            if (x0 >> p) & 1:
                continue
            above = sum(1 for q in range(p + 1, n) if not (x0 >> q) & 1)
            if above < need - 1:
                break
            low_free = [q for q in range(p) if not (pivots >> q) & 1]
            for bits in range(1 << len(low_free)):
                v = 1 << p
                for i, q in enumerate(low_free):
                    if (bits >> i) & 1:
                        v |= 1 << q
                shifted = pts ^ v
                if not level[shifted].all():
                    continue
                found = grow(np.concatenate((pts, shifted)), dirs + [v], p, pivots | (1 << p))
                if found is not None:
                    return found
        return None

    return grow(start, [], -1, 0)


def exact_min_codim(f: BooleanFunction, max_codim: int | None = None) -> ConstantSubspaceResult:
    n = f.n
    if max_codim is None:
        max_codim = n
    if not 0 <= max_codim <= n:
        raise InputError(f"max_codim must be in [0, {n}]")
    bits = f.bits().astype(bool)
    levels = (~bits, bits)
    for codim in range(max_codim + 1):
        k = n - codim
        for x0 in range(f.size):
            level = levels[int(bits[x0])]
            dirs = _find_cube(level, n, x0, k)
            if dirs is None:
                continue
            D = gf2.row_reduce(dirs, n)
            forms = gf2.annihilator(D)
            V = AffineSubspace.from_constraints(((g, gf2.dot(g, x0)) for g in forms.rows), n)
            return ConstantSubspaceResult(V, evaluate(f, x0), V.codim, Strategy.EXACT_MIN)
    raise NotFoundError(f"no constant affine subspace of co-dimension <= {max_codim}")


def validate_constant(sp: Spectrum, result: ConstantSubspaceResult) -> bool:
    if result.subspace.ambient_n != sp.n or result.codim != result.subspace.codim:
        return False
    restricted = restrict_spectrum(sp, result.subspace)
    return dict(restricted.items()) == {0: result.constant_value * sp.scale}

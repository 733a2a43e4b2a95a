"""Generators for test functions with known sparsity and dimension."""

from __future__ import annotations

import numpy as np

from . import gf2
from .affine import AffineSubspace
from .errors import InputError
from .spectrum import BooleanFunction, parity_bits

FAMILIES = ("address", "subspace_indicator", "inner_product", "parity", "majority",
            "random_parity_junta", "random", "constant")


def _points(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


class KOutOfRange(InputError):
    pass


def address(k: int) -> BooleanFunction:
    """Add: the k most significant bits pick one of the 2^k remaining bits.

    For k=1 the variables are (a, y0, y1) and f = (-1)^(y_a).
    """
    if not isinstance(k, int) or not 1 <= k <= 4:
        raise KOutOfRange(f"address k must be in [1, 4], got {k!r}")
    m = 1 << k
    n = k + m
    gf2.check_n(n)
    x = _points(n)
    addr = x >> m
    # y_i sits at bit m-1-i
    out = (x >> (m - 1 - addr)) & 1
    return BooleanFunction.from_bits(out.astype(np.uint8), n)


def subspace_indicator(V: AffineSubspace) -> BooleanFunction:
    """-1 on V and +1 elsewhere; s = 2^codim and dim = codim."""
    if V.codim < 2:
        raise InputError("subspace indicator needs co-dimension >= 2")
    x = _points(V.ambient_n)
    inside = np.ones_like(x, dtype=bool)
    for form, value in V.constraints:
        inside &= parity_bits(form, x) == value
    return BooleanFunction.from_bits(inside.astype(np.uint8), V.ambient_n)


def inner_product(m: int) -> BooleanFunction:
    """(-1)^(sum x_i y_i) with x the top m bits and y the low m bits."""
    if not isinstance(m, int) or m < 1:
        raise InputError(f"inner product needs m >= 1, got {m!r}")
    gf2.check_n(2 * m)
    x = _points(2 * m)
    return BooleanFunction.from_bits(parity_bits(x >> m, x & ((1 << m) - 1)).astype(np.uint8), 2 * m)


def parity(mask: int, n: int) -> BooleanFunction:
    gf2.check_n(n)
    if not 0 <= mask < (1 << n):
        raise InputError(f"mask {mask:#x} does not fit n={n}")
    return BooleanFunction.from_bits(parity_bits(mask, _points(n)).astype(np.uint8), n)


def majority(n: int) -> BooleanFunction:
    gf2.check_n(n)
    if n % 2 == 0:
        raise InputError("majority needs odd n")
    ones = np.bitwise_count(_points(n))
    return BooleanFunction.from_bits((ones > n // 2).astype(np.uint8), n)


def constant(sign: int, n: int) -> BooleanFunction:
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    gf2.check_n(n)
    return BooleanFunction.from_bits(np.full(1 << n, sign == -1, dtype=np.uint8), n)


def junta(n: int, forms, g: BooleanFunction) -> BooleanFunction:
    """f(x) = g(forms[0](x), ..., forms[k-1](x)), forms[0] feeding g's top bit."""
    k = len(forms)
    if g.n != k:
        raise InputError(f"inner function has {g.n} inputs, {k} forms given")
    x = _points(n)
    idx = np.zeros_like(x)
    for form in forms:
        idx = (idx << 1) | parity_bits(form, x)
    return BooleanFunction.from_bits(g.bits()[idx], n)


def random_function(n: int, seed: int) -> BooleanFunction:
    gf2.check_n(n)
    rng = np.random.default_rng(seed)
    return BooleanFunction.from_bits(rng.integers(0, 2, 1 << n, dtype=np.uint8), n)


def random_parity_junta(n: int, k: int, seed: int) -> BooleanFunction:
    gf2.check_n(n)
    if not 0 <= k <= min(n, 12):
        raise InputError(f"junta size k must be in [0, {min(n, 12)}]")
    rng = np.random.default_rng(seed)
    if k == 0:
        return constant(1 if rng.integers(0, 2) == 0 else -1, n)
    g = BooleanFunction.from_bits(rng.integers(0, 2, 1 << k, dtype=np.uint8), k)
    forms: list[int] = []
    while len(forms) < k:
        v = int(rng.integers(1, 1 << n))
        if gf2.rank(forms + [v], n) > len(forms):
            forms.append(v)
    return junta(n, forms, g)


def from_spec(spec: dict) -> BooleanFunction:
    """Build a function from a FamilySpec dict such as ``{"family": "address", "k": 2}``."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise InputError("family spec must be an object with a 'family' key")
    name = spec["family"]
    p = {k: v for k, v in spec.items() if k != "family"}
    try:
        if name == "address":
            return address(int(p["k"]))
        if name == "subspace_indicator":
            n = int(p["n"])
            if "constraints" in p:
                V = AffineSubspace.from_json(p["constraints"], n)
            else:
                codim = int(p.get("codim", p.get("k")))
                if not 0 <= codim <= n:
                    raise InputError(f"codim must be in [0, {n}]")
                V = AffineSubspace.from_constraints(((gf2.var_mask(i, n), 0) for i in range(1, codim + 1)), n)
            return subspace_indicator(V)
        if name == "inner_product":
            return inner_product(int(p["m"]))
        if name == "parity":
            n = int(p["n"])
            mask = p["mask"]
            return parity(int(mask, 16) if isinstance(mask, str) else int(mask), n)
        if name == "majority":
            return majority(int(p["n"]))
        if name == "constant":
            return constant(int(p.get("sign", 1)), int(p["n"]))
        if name == "random_parity_junta":
            return random_parity_junta(int(p["n"]), int(p["k"]), int(p.get("seed", 0)))
        if name == "random":
            return random_function(int(p["n"]), int(p.get("seed", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad parameters for family {name!r}: {exc}")
    raise InputError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")


def describe(spec: dict) -> str:
    return ",".join(f"{k}={spec[k]}" for k in spec if k != "family")

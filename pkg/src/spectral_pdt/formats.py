"""Text input formats: hex truth tables and ANF expressions."""

from __future__ import annotations

import re

import numpy as np

from . import gf2
from .errors import InputError
from .spectrum import BooleanFunction

_VAR = re.compile(r"x(\d+)$")


def parse_anf(text: str, n: int | None = None) -> BooleanFunction:
    """Parse ``x1*x2 + x3 + 1`` (0/1 logic, XOR of monomials) into a +/-1 function."""
    monomials: list[list[int]] = []
    for term in text.replace("\n", " ").split("+"):
        term = term.strip()
        if not term:
            raise InputError(f"empty monomial in {text!r}")
        if term == "1":
            monomials.append([])
            continue
        if term == "0":
            continue
        idx = []
        for tok in term.split("*"):
            m = _VAR.match(tok.strip())
            if not m or int(m.group(1)) < 1:
                raise InputError(f"bad variable token {tok.strip()!r}")
            idx.append(int(m.group(1)))
        monomials.append(idx)
    top = max((i for mono in monomials for i in mono), default=1)
    if n is None:
        n = top
    if top > n:
        raise InputError(f"x{top} exceeds n={n}")
    gf2.check_n(n)
    anf = np.zeros(1 << n, dtype=np.uint8)
    for mono in monomials:
        mask = 0
        for i in mono:
            mask |= gf2.var_mask(i, n)
        anf[mask] ^= 1
    # Moebius transform: table(x) = XOR of anf[m] over m subset of x
    h = 1
    while h < anf.shape[0]:
        a = anf.reshape(-1, 2, h)
        a[:, 1, :] ^= a[:, 0, :]
        h <<= 1
    return BooleanFunction.from_bits(anf, n)

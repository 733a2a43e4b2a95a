"""Boolean functions on F_2^n and their exact Fourier spectra.

Values follow the (-1)^b convention: table bit 0 is +1, bit 1 is -1.  Point
indices and masks share the bit order of :mod:`spectral_pdt.gf2` (x_1 is the
most significant bit), so chi_gamma(x) = (-1)^popcount(gamma & x).

Fourier coefficients are kept as integers at scale 2^n:
c_gamma = sum_x f(x) chi_gamma(x) = 2^n * fhat(gamma).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import gf2
from .errors import InputError, NotBooleanError, UnsupportedNormError


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly over int64 along the last axis.

    ``out[..., g] = sum_x values[..., x] * (-1)^popcount(g & x)``.  The
    transform is its own inverse up to a factor of the axis length.
    """
    a = np.asarray(values, dtype=np.int64)
    shape = a.shape
    size = shape[-1]
    if size & (size - 1):
        raise InputError(f"length {size} is not a power of two")
    lead = int(np.prod(shape[:-1], dtype=np.int64))
    h = 1
    while h < size:
        a = a.reshape(lead, -1, 2, h)
        a = np.stack((a[:, :, 0, :] + a[:, :, 1, :], a[:, :, 0, :] - a[:, :, 1, :]), axis=2)
        h <<= 1
    return a.reshape(shape)


def parity_bits(masks: np.ndarray | int, points: np.ndarray | int) -> np.ndarray:
    """popcount(mask & x) mod 2, broadcast over numpy arrays."""
    return (np.bitwise_count(np.bitwise_and(masks, points)) & 1).astype(np.int64)


@dataclass(frozen=True)
class BooleanFunction:
    """A function F_2^n -> {+1, -1} stored as a packed truth table.

    ``packed`` holds the 2^n table bits MSB-first (``numpy.packbits`` order).
    """

    n: int
    packed: bytes

    def __post_init__(self):
        gf2.check_n(self.n, allow_zero=True)
        if len(self.packed) != max(1, (1 << self.n) // 8):
            raise InputError(f"packed table has {len(self.packed)} bytes, n={self.n}")

    @classmethod
    def from_bits(cls, bits, n: int | None = None) -> "BooleanFunction":
        arr = np.asarray(bits, dtype=np.uint8)
        if n is None:
            n = int(arr.shape[0]).bit_length() - 1
        if arr.shape != (1 << n,) or np.any(arr > 1):
            raise InputError(f"expected {1 << n} bits in {{0,1}}")
        return cls(n, np.packbits(arr).tobytes())

    @classmethod
    def from_signs(cls, signs, n: int | None = None) -> "BooleanFunction":
        arr = np.asarray(signs)
        if not np.all((arr == 1) | (arr == -1)):
            raise NotBooleanError("values must be +1 or -1")
        return cls.from_bits((arr == -1).astype(np.uint8), n)

    @classmethod
    def from_callable(cls, fn, n: int) -> "BooleanFunction":
        """Build from ``fn(x) -> +1/-1`` over integer points x."""
        return cls.from_signs([fn(x) for x in range(1 << n)], n)

    @property
    def size(self) -> int:
        return 1 << self.n

    def bits(self) -> np.ndarray:
        raw = np.frombuffer(self.packed, dtype=np.uint8)
        return np.unpackbits(raw)[: self.size]

    def signs(self) -> np.ndarray:
        return (1 - 2 * self.bits().astype(np.int64))

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def to_hex(self) -> str:
        digits = max(1, self.size // 4)
        return self.packed.hex()[:digits]

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "BooleanFunction":
        text = "".join(text.split()).lower()
        if text.startswith("0x"):
            text = text[2:]
        if not text:
            raise InputError("empty truth table")
        try:
            raw = bytes.fromhex(text if len(text) % 2 == 0 else text + "0")
        except ValueError:
            raise InputError("truth table is not a hex string")
        if n is None:
            n = (len(text) * 4).bit_length() - 1
            if len(text) * 4 != 1 << n:
                raise InputError(f"{len(text)} hex digits is not 2^n bits")
        if len(text) != max(1, (1 << n) // 4):
            raise InputError(f"n={n} needs {max(1, (1 << n) // 4)} hex digits, got {len(text)}")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8))
        if np.any(bits[1 << n:]):
            raise InputError("padding bits beyond 2^n must be zero")
        return cls.from_bits(bits[: 1 << n], n)


def evaluate(f: BooleanFunction, x: int) -> int:
    if not 0 <= x < f.size:
        raise InputError(f"point {x:#x} outside F_2^{f.n}")
    byte = f.packed[x >> 3]
    return -1 if (byte >> (7 - (x & 7))) & 1 else 1


def evaluate_character(gamma: int, x: int) -> int:
    return -1 if gf2.dot(gamma, x) else 1


@dataclass(frozen=True)
class Spectrum:
    """Nonzero Fourier coefficients at scale 2^n, keyed by mask (ascending)."""

    n: int
    coeffs: Mapping[int, int]

    def __post_init__(self):
        gf2.check_n(self.n, allow_zero=True)
        limit = 1 << self.n
        clean = {}
        for mask in sorted(self.coeffs):
            c = int(self.coeffs[mask])
            if not 0 <= mask < limit:
                raise InputError(f"mask {mask:#x} does not fit n={self.n}")
            if c:
                clean[int(mask)] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def scale(self) -> int:
        return 1 << self.n

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, mask: int) -> int:
        return self.coeffs.get(mask, 0)

    def items(self):
        return self.coeffs.items()

    def dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=np.int64)
        for mask, c in self.coeffs.items():
            out[mask] = c
        return out

    @classmethod
    def from_dense(cls, values: np.ndarray, n: int) -> "Spectrum":
        idx = np.flatnonzero(values)
        return cls(n, dict(zip(idx.tolist(), values[idx].tolist())))

    def is_constant(self) -> bool:
        return len(self.coeffs) == 1 and 0 in self.coeffs

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coeffs": [
                {"mask_hex": gf2.form_to_hex(m), "coeff_scaled": c} for m, c in self.coeffs.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        n = int(data["n"])
        return cls(n, {gf2.form_from_hex(e["mask_hex"], n): int(e["coeff_scaled"]) for e in data["coeffs"]})


def wht(f: BooleanFunction) -> Spectrum:
    return Spectrum.from_dense(fwht(f.signs()), f.n)


def inverse_wht(sp: Spectrum) -> BooleanFunction:
    """Rebuild the truth table; raises NotBooleanError unless every value is +/-1."""
    values = fwht(sp.dense())
    # sum_g c_g chi_g(x) = 2^n f(x)
    if not np.all(np.abs(values) == sp.scale):
        raise NotBooleanError("spectrum does not invert to a +/-1 function")
    return BooleanFunction.from_bits((values < 0).astype(np.uint8), sp.n)


def support(sp: Spectrum) -> list[int]:
    return list(sp.coeffs)


def sparsity(sp: Spectrum) -> int:
    return len(sp.coeffs)


def dimension(sp: Spectrum) -> int:
    return gf2.rank(sp.coeffs, sp.n)


def spectral_norm(sp: Spectrum, p: int = 1) -> Fraction:
    """Exact ||fhat||_1 for p=1, and exact ||fhat||_2 squared for p=2."""
    if p == 1:
        return Fraction(sum(abs(c) for c in sp.coeffs.values()), sp.scale)
    if p == 2:
        return Fraction(sum(c * c for c in sp.coeffs.values()), sp.scale * sp.scale)
    raise UnsupportedNormError(f"only p in {{1, 2}} is supported, got {p!r}")


def parseval_ok(sp: Spectrum) -> bool:
    return sum(c * c for c in sp.coeffs.values()) == 1 << (2 * sp.n)


def check_norm_sparsity(sp: Spectrum) -> bool:
    """(sum |c|)^2 <= s * 4^n, the scaled form of ||fhat||_1 <= sqrt(s)."""
    l1 = sum(abs(c) for c in sp.coeffs.values())
    return l1 * l1 <= len(sp.coeffs) << (2 * sp.n)


def check_order_chain(sp: Spectrum) -> bool:
    """2^dim >= s and dim <= s."""
    s = sparsity(sp)
    d = dimension(sp)
    return (1 << d) >= s and d <= s


def naive_spectrum(f: BooleanFunction) -> Spectrum:
    """O(4^n) reference transform; for tests and small n only."""
    signs = f.signs()
    out = {}
    for g in range(f.size):
        out[g] = int(sum(int(signs[x]) * evaluate_character(g, x) for x in range(f.size)))
    return Spectrum(f.n, out)


def spectrum_from_items(n: int, items: Iterable[tuple[int, int]]) -> Spectrum:
    acc: dict[int, int] = {}
    for mask, c in items:
        acc[mask] = acc.get(mask, 0) + c
    return Spectrum(n, acc)

"""Kronecker substitution helpers.

A vector of non-negative integers is packed into one big integer with a fixed
slot width, so that a single big-integer product computes the full
convolution.  Slots must be wide enough to hold every convolution sum.
"""

from __future__ import annotations

from typing import Sequence


def slot_bytes(max_coeff: int, terms: int) -> int:
    """Bytes per slot for a convolution of `terms` products of values <= max_coeff."""
    bound = max_coeff * max_coeff * max(terms, 1)
    return bound.bit_length() // 8 + 1


def pack(coeffs: Sequence[int], width: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in coeffs), "little")


def unpack(n: int, width: int, count: int) -> list[int]:
    raw = n.to_bytes(width * count, "little")
    return [int.from_bytes(raw[i:i + width], "little") for i in range(0, width * count, width)]


def convolve(a: Sequence[int], b: Sequence[int], max_coeff: int) -> list[int]:
    """Full linear convolution of two non-negative vectors bounded by max_coeff."""
    if not a or not b:
        return []
    width = slot_bytes(max_coeff, min(len(a), len(b)))
    return unpack(pack(a, width) * pack(b, width), width, len(a) + len(b) - 1)

"""Pairing functions: encode two seed integers as one.

Three variants are provided:

* ``pair_t`` -- triangular, for exchangeable pairs with x > y.  Visits
  pairs in exactly the order the search loop tests them (increasing x,
  then increasing y), so the stored code doubles as a test counter.
* ``pair_s`` -- Szudzik, for non-exchangeable pairs.  Enumerates all of
  [k] x [k] before any pair containing a coordinate >= k.
* ``pair_c`` -- Cantor, kept for cross-checking; not on the hot path.

Inversion uses the exact integer square root and is always verified by
re-pairing.  A failed verification never escapes this module silently:
it raises PairingError, which construction treats as "reject this code".
"""

from __future__ import annotations

import math

# Inputs above this would not leave slack for 64-bit codes.
MAX_COORD = 2**31 - 1
MAX_CODE = 2**64 - 1


class PairingError(ValueError):
    """Domain violation, overflow, or failed inversion verification."""


def _check_coord(x: int, y: int) -> None:
    if x < 0 or y < 0:
        raise PairingError(f"coordinates must be non-negative: ({x}, {y})")
    if x > MAX_COORD or y > MAX_COORD:
        raise PairingError(f"coordinate exceeds {MAX_COORD}: ({x}, {y})")


def pair_t(x: int, y: int) -> int:
    """Triangular code x(x-1)/2 + y, defined for x > y."""
    _check_coord(x, y)
    if x <= y:
        raise PairingError(f"pair_t requires x > y, got ({x}, {y})")
    z = x * (x - 1) // 2 + y
    if z > MAX_CODE:
        raise PairingError(f"pair_t({x}, {y}) overflows 64 bits")
    return z


def unpair_t(z: int) -> tuple[int, int]:
    """Invert pair_t; verified by re-pairing, with a +-1 repair window."""
    if z < 0:
        raise PairingError(f"code must be non-negative: {z}")
    # x = floor(1/2 + sqrt(1/4 + 2z)) computed exactly in integers
    x = (1 + math.isqrt(8 * z + 1)) // 2
    for cand in (x, x - 1, x + 1):
        if cand >= 1:
            y = z - cand * (cand - 1) // 2
            if 0 <= y < cand:
                return cand, y
    raise PairingError(f"unpair_t({z}): inversion verification failed")


def pair_s(x: int, y: int) -> int:
    """Szudzik code: y^2 + x if x < y, else x^2 + x + y."""
    _check_coord(x, y)
    z = y * y + x if x < y else x * x + x + y
    if z > MAX_CODE:
        raise PairingError(f"pair_s({x}, {y}) overflows 64 bits")
    return z


def unpair_s(z: int) -> tuple[int, int]:
    """Invert pair_s; verified by re-pairing."""
    if z < 0:
        raise PairingError(f"code must be non-negative: {z}")
    w = math.isqrt(z)
    rem = z - w * w
    if rem < w:
        x, y = rem, w
    else:
        x, y = w, rem - w
    if pair_s(x, y) != z:
        raise PairingError(f"unpair_s({z}): inversion verification failed")
    return x, y


def pair_c(x: int, y: int) -> int:
    """Cantor code (x + y)(x + y + 1)/2 + y."""
    _check_coord(x, y)
    s = x + y
    z = s * (s + 1) // 2 + y
    if z > MAX_CODE:
        raise PairingError(f"pair_c({x}, {y}) overflows 64 bits")
    return z


def unpair_c(z: int) -> tuple[int, int]:
    """Invert pair_c; verified by re-pairing."""
    if z < 0:
        raise PairingError(f"code must be non-negative: {z}")
    w = (math.isqrt(8 * z + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = z - t
    x = w - y
    if x < 0 or y < 0 or pair_c(x, y) != z:
        raise PairingError(f"unpair_c({z}): inversion verification failed")
    return x, y

"""Bit-level codecs for the serialized index.

* BitWriter / BitReader -- little-endian bit streams (LSB first within
  each byte), the convention used by every block of the index format.
* EliasFano -- succinct monotone integer sequence with random access
  via select on the unary-coded high bits.
* RiceCodec -- Golomb-Rice coding of the leaf seed codes with one
  global parameter.
"""

from __future__ import annotations

import struct

import numpy as np


class BitWriter:
    """Append-only little-endian bit stream."""

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._nacc = 0

    def write(self, value: int, nbits: int) -> None:
        if nbits < 0 or value < 0 or (nbits < 64 and value >> nbits):
            raise ValueError(f"value {value} does not fit in {nbits} bits")
        self._acc |= value << self._nacc
        self._nacc += nbits
        while self._nacc >= 8:
            self._buf.append(self._acc & 0xFF)
            self._acc >>= 8
            self._nacc -= 8

    def write_unary(self, q: int) -> None:
        """q one-bits followed by a terminating zero."""
        while q >= 32:
            self.write(0xFFFFFFFF, 32)
            q -= 32
        self.write((1 << q) - 1, q)
        self.write(0, 1)

    @property
    def bit_length(self) -> int:
        return 8 * len(self._buf) + self._nacc

    def getvalue(self) -> bytes:
        """Byte string, final partial byte zero-padded."""
        out = bytes(self._buf)
        if self._nacc:
            out += bytes([self._acc & 0xFF])
        return out


class BitReader:
    """Little-endian bit stream reader over a bytes object."""

    def __init__(self, data: bytes, bit_offset: int = 0):
        self._data = data
        self._pos = bit_offset

    def read(self, nbits: int) -> int:
        end = self._pos + nbits
        if end > 8 * len(self._data):
            raise ValueError("bit stream exhausted")
        value = 0
        shift = 0
        pos = self._pos
        while pos < end:
            byte = self._data[pos >> 3]
            take = min(8 - (pos & 7), end - pos)
            value |= ((byte >> (pos & 7)) & ((1 << take) - 1)) << shift
            shift += take
            pos += take
        self._pos = end
        return value

    def read_unary(self) -> int:
        q = 0
        while self.read(1):
            q += 1
        return q

    @property
    def bit_position(self) -> int:
        return self._pos


def _bits_to_array(data: bytes, nbits: int) -> np.ndarray:
    """Unpack a little-endian bit stream into a 0/1 uint8 array."""
    arr = np.frombuffer(data, dtype=np.uint8)
    return np.unpackbits(arr, bitorder="little")[:nbits]


class EliasFano:
    """Monotone non-decreasing uint64 sequence in ~n(2 + log2(u/n)) bits.

    Each value splits into l = floor(log2(u/n)) explicit low bits and a
    unary-coded high part: bit (v_i >> l) + i of the high bit vector is
    set.  Random access is select(i) on that vector, accelerated by a
    sampled index of every 64th one-bit.
    """

    SAMPLE = 64

    def __init__(self, values, universe: int | None = None):
        values = np.ascontiguousarray(values, dtype=np.uint64)
        n = values.size
        if n and np.any(values[1:] < values[:-1]):
            raise ValueError("sequence must be non-decreasing")
        if universe is None:
            universe = int(values[-1]) + 1 if n else 1
        if n and int(values[-1]) >= universe:
            raise ValueError("value out of universe")
        self.n = n
        self.u = int(universe)
        self.l = max(0, (self.u // n).bit_length() - 1) if n else 0
        self._encode(values)

    def _encode(self, values) -> None:
        l = self.l
        low_mask = (1 << l) - 1
        w = BitWriter()
        for v in values.tolist():
            w.write(v & low_mask, l)
        self._low = w.getvalue()
        nhigh = self.n + (self.u >> l) + 1
        highs = np.zeros(nhigh, np.uint8)
        if self.n:
            highs[(values >> np.uint64(l)).astype(np.int64)
                  + np.arange(self.n)] = 1
        self._high = np.packbits(highs, bitorder="little").tobytes()
        self._nhigh = nhigh
        # select samples: bit position of ones SAMPLE, 2*SAMPLE, ...
        ones = np.flatnonzero(highs)
        self._samples = ones[self.SAMPLE - 1::self.SAMPLE].astype(np.int64)

    def __len__(self) -> int:
        return self.n

    def _select(self, i: int) -> int:
        """Bit position of the (i+1)-th set high bit."""
        rank = 0
        pos = 0
        s = i // self.SAMPLE
        if s > 0:
            pos = int(self._samples[s - 1]) + 1
            rank = s * self.SAMPLE
        data = self._high
        while True:
            byte = data[pos >> 3]
            byte >>= pos & 7
            width = 8 - (pos & 7)
            c = byte.bit_count()
            if rank + c > i:
                while True:
                    if byte & 1:
                        if rank == i:
                            return pos
                        rank += 1
                    byte >>= 1
                    pos += 1
            rank += c
            pos += width

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        p = self._select(i)
        high = p - i
        r = BitReader(self._low, i * self.l)
        return (high << self.l) | r.read(self.l)

    def decode_all(self) -> np.ndarray:
        """All values as one array (used for query-side preloading)."""
        if self.n == 0:
            return np.zeros(0, np.uint64)
        highs = _bits_to_array(self._high, self._nhigh)
        ones = np.flatnonzero(highs)
        high = (ones - np.arange(self.n)).astype(np.uint64)
        lows = np.empty(self.n, np.uint64)
        r = BitReader(self._low)
        for i in range(self.n):
            lows[i] = r.read(self.l)
        return (high << np.uint64(self.l)) | lows

    @property
    def num_bits(self) -> int:
        """Serialized payload bits: low array plus high bit vector.

        The select samples are rebuilt on load and not counted.
        """
        return self.n * self.l + self._nhigh

    def to_bytes(self) -> bytes:
        return (struct.pack("<QQB", self.n, self.u, self.l)
                + self._low + self._high)

    @classmethod
    def from_bytes(cls, data: bytes) -> "EliasFano":
        if len(data) < 17:
            raise ValueError("elias-fano blob too short")
        n, u, l = struct.unpack_from("<QQB", data, 0)
        obj = cls.__new__(cls)
        obj.n = n
        obj.u = u
        obj.l = l
        nlow = (n * l + 7) // 8
        nhigh = n + (u >> l) + 1
        nhigh_bytes = (nhigh + 7) // 8
        if len(data) != 17 + nlow + nhigh_bytes:
            raise ValueError("elias-fano blob has wrong length")
        obj._low = data[17:17 + nlow]
        obj._high = data[17 + nlow:]
        obj._nhigh = nhigh
        highs = _bits_to_array(obj._high, nhigh)
        ones = np.flatnonzero(highs)
        if ones.size != n:
            raise ValueError("elias-fano high bits corrupt")
        obj._samples = ones[cls.SAMPLE - 1::cls.SAMPLE].astype(np.int64)
        return obj


def rice_parameter(values) -> int:
    """Global Golomb-Rice parameter: floor(log2(mean + 1))."""
    values = np.asarray(values, dtype=np.uint64)
    if values.size == 0:
        return 0
    mean = float(values.mean())
    return max(0, int(np.floor(np.log2(mean + 1.0))))


class RiceCodec:
    """Golomb-Rice coding with parameter b.

    Each value v is stored as quotient v >> b in unary (ones then a
    zero) followed by b explicit remainder bits.
    """

    def __init__(self, b: int):
        if not 0 <= b <= 58:
            raise ValueError(f"rice parameter out of range: {b}")
        self.b = b

    def encode(self, values) -> bytes:
        w = BitWriter()
        mask = (1 << self.b) - 1
        for v in np.asarray(values, dtype=np.uint64).tolist():
            w.write_unary(v >> self.b)
            w.write(v & mask, self.b)
        self._last_bits = w.bit_length
        return w.getvalue()

    def decode(self, data: bytes, count: int) -> np.ndarray:
        r = BitReader(data)
        out = np.empty(count, np.uint64)
        for i in range(count):
            q = r.read_unary()
            out[i] = (q << self.b) | r.read(self.b)
        return out

    def encoded_bits(self, values) -> int:
        """Exact coded size in bits, without materializing the stream."""
        values = np.asarray(values, dtype=np.uint64)
        return int((values >> np.uint64(self.b)).sum()) \
            + values.size * (1 + self.b)

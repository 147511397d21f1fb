"""Bit-file I/O for information words and codewords.

ASCII layout: one section per line, M characters of '0'/'1'. Packed layout:
the flat bit string packed 8 bits per byte, little bit order, no header -
the reader is told how many bits to expect.
"""
from __future__ import annotations

import numpy as np

from .errors import ParseError


def write_bits_ascii(path, bits, per_line):
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if bits.size % per_line != 0:
        raise ParseError(f"{bits.size} bits do not fill lines of {per_line}")
    rows = bits.reshape(-1, per_line)
    with open(path, "w") as fh:
        for row in rows:
            fh.write("".join("1" if b else "0" for b in row) + "\n")


def read_bits_ascii(path):
    """Returns (bits, per_line); all lines must have equal length."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if set(line) - {"0", "1"}:
                raise ParseError(f"{path}: line {lineno}: non-binary characters")
            if width is None:
                width = len(line)
            elif len(line) != width:
                raise ParseError(
                    f"{path}: line {lineno}: length {len(line)} != {width}")
            rows.append([1 if ch == "1" else 0 for ch in line])
    if not rows:
        raise ParseError(f"{path}: no bit lines found")
    return np.array(rows, dtype=np.uint8).reshape(-1), width


def write_bits_packed(path, bits):
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
    with open(path, "wb") as fh:
        fh.write(np.packbits(bits, bitorder="little").tobytes())


def read_bits_packed(path, n_bits):
    with open(path, "rb") as fh:
        raw = np.frombuffer(fh.read(), dtype=np.uint8)
    if raw.size * 8 < n_bits or raw.size * 8 - n_bits >= 8:
        raise ParseError(
            f"{path}: {raw.size} bytes cannot hold exactly {n_bits} bits")
    return np.unpackbits(raw, bitorder="little")[:n_bits]

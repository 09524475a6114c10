"""Delta + varint compressed posting lists.

Posting lists hold sorted, duplicate-free integer instance ids. They are
stored gap-encoded with LEB128-style variable-length integers; the codec is
lossless by construction and round-trip tested.
"""

from __future__ import annotations


def _write_varint(out: bytearray, value: int) -> None:
    if value < 0:
        raise ValueError("posting ids must be nonnegative")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def encode_postings(ids) -> bytes:
    """Encode a sorted, duplicate-free iterable of nonnegative ints."""
    out = bytearray()
    prev = -1
    for i in ids:
        if i <= prev:
            raise ValueError("posting list must be strictly increasing")
        _write_varint(out, i - prev - 1 if prev >= 0 else i)
        prev = i
    return bytes(out)


def decode_postings(data: bytes) -> list[int]:
    ids: list[int] = []
    value = 0
    shift = 0
    for byte in data:
        value |= (byte & 0x7F) << shift
        if byte & 0x80:
            shift += 7
            continue
        # first value is absolute; subsequent values are (gap - 1)
        ids.append(value if not ids else ids[-1] + value + 1)
        value = 0
        shift = 0
    if shift:
        raise ValueError("truncated varint")
    return ids

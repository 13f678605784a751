"""Bit-array helpers. A mask is a plain int with bit i standing for vertex i."""

WORD_BITS = 64


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def all_bits(n):
    return (1 << n) - 1


def has_bit(mask, i):
    return (mask >> i) & 1 == 1


def iter_bits(mask):
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def word_count(nbits):
    """Machine words needed to hold nbits bits."""
    return (nbits + WORD_BITS - 1) // WORD_BITS

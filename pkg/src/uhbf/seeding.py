"""Deterministic seed derivation for trial-indexed random streams.

Every stochastic component (channel draws, phase initializations) derives its
PCG64 seed from a base seed plus integer tags, so results depend only on the
tags and never on evaluation order.  Derivation: starting from the base seed,
each tag is folded in as one splitmix64 avalanche round over
``state XOR tag``.
"""

MASK64 = (1 << 64) - 1

# Domain tags keep independent consumers of the same base seed decorrelated.
DOMAIN_CHANNEL = 0x11
DOMAIN_PROGRAM = 0x22


def splitmix64(value: int) -> int:
    """One splitmix64 step: a cheap, well-mixed 64-bit hash."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(base: int, *tags: int) -> int:
    """Fold integer tags into ``base``, one avalanche round per tag."""
    mixed = base & MASK64
    for tag in tags:
        mixed = splitmix64(mixed ^ (tag & MASK64))
    return mixed

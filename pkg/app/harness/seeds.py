"""
Per-trial seed derivation.

seed_i = splitmix64(master + (i + 1) * 0x9E3779B97F4A7C15 mod 2^64)
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_trial_seed(master: int, index: int) -> int:
    return splitmix64((master + (index + 1) * GOLDEN_GAMMA) & MASK64)

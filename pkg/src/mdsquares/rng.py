"""Portable seeded generator (SplitMix64).

The stream is fully specified by the algorithm below, so digit-set samples
reproduce bit-for-bit in any language that implements it:

    state <- state + 0x9E3779B97F4A7C15            (mod 2**64)
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9    (mod 2**64)
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB    (mod 2**64)
    output z xor (z >> 31)

Bounded draws use rejection sampling against the largest multiple of n
below 2**64; subsets use a partial Fisher-Yates shuffle of range(n).
"""

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def subset(self, n: int, k: int) -> list[int]:
        """Uniform size-k subset of range(n), returned sorted."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} items from {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


def derive_seed(*parts: int) -> int:
    """Mix integers into one 64-bit seed (used for per-position sub-seeds)."""
    g = SplitMix64(0x5EED)
    acc = 0
    for part in parts:
        g.state ^= part & _MASK
        acc ^= g.next_u64()
    return acc

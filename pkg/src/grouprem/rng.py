"""SplitMix64: a 64-bit-state generator simple enough to port bit-exactly.

Used for every seeded random set so that instance files reproduce across
machines and languages.  Reference: Steele, Lea and Flood, "Fast
splittable pseudorandom number generators" (OOPSLA 2014).
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _mix(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def subset(self, n: int, density: float) -> list[int]:
        """Each of 0..n-1 kept independently with probability ``density``."""
        return [x for x in range(n) if self.random() < density]


def derive_seed(seed: int, *keys: int) -> int:
    """Stateless child seed for (seed, key1, key2, ...)."""
    z = seed & MASK64
    for k in keys:
        z = _mix((z + GOLDEN * (k + 1)) & MASK64)
    return z

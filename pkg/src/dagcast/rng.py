"""Small deterministic 64-bit generator used for reproducible randomness.

The generator is splitmix64: a fixed additive counter passed through a
mixing function.  It is trivial to reimplement bit-exactly anywhere, which
keeps seeded runs reproducible across machines and languages.
"""

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream; `split()` derives an independent child stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, so the draw is unbiased."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (MASK64 // n) * n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle driven by this stream."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(i + 1)
            items[i], items[j] = items[j], items[i]

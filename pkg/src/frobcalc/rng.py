"""Deterministic 64-bit PRNG used for all sampling.

SplitMix64 (Steele-Lea-Vigna): state advances by the odd constant
0x9e3779b97f4a7c15 and the output is a finalizer of the new state.  The
algorithm is fixed here so that seeded reports are reproducible across
platforms and Python versions; nothing in the package uses ``random``.
"""

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def randrange(self, n):
        """Uniform integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def randint(self, lo, hi):
        """Uniform integer in [lo, hi], inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def small_int(self, bound=4, nonzero=False):
        """Small integer in [-bound, bound], optionally excluding 0."""
        while True:
            v = self.randint(-bound, bound)
            if v != 0 or not nonzero:
                return v

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def spawn(self):
        """Independent child generator; keeps sampling order stable per suite."""
        return SplitMix64(self.next_u64())

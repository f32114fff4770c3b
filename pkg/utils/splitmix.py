"""
SplitMix64 generator and the keyed Fisher-Yates shuffle built on it.

Pure-integer arithmetic masked to 64 bits so the streams match any other
SplitMix64 implementation bit for bit.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MUL1 = 0xBF58476D1CE4E5B9
MUL2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 keyed by a 64-bit seed."""

    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * MUL1) & MASK64
        z = ((z ^ (z >> 27)) * MUL2) & MASK64
        return z ^ (z >> 31)

    def below(self, bound):
        """Index in [0, bound) as next_u64() mod bound."""
        return self.next_u64() % bound


class BitStream:
    """
    Continuous bit source over a SplitMix64 stream.

    Each 64-bit output word is consumed most-significant bit first; a stream
    keeps its partial word between calls.
    """

    def __init__(self, seed):
        self._rng = SplitMix64(seed)
        self._word = 0
        self._left = 0

    def take(self, nbits):
        bits = []
        while len(bits) < nbits:
            if self._left == 0:
                self._word = self._rng.next_u64()
                self._left = 64
            self._left -= 1
            bits.append((self._word >> self._left) & 1)
        return bits


def fisher_yates(seed, n):
    """
    Full keyed permutation of range(n).

    Forward Fisher-Yates: for i = 0 .. n-2, j = i + (next_u64() mod (n - i)),
    then swap positions i and j.
    """
    rng = SplitMix64(seed)
    perm = list(range(n))
    for i in range(n - 1):
        j = i + rng.below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def fisher_yates_prefix(seed, n, k):
    """
    First k entries of fisher_yates(seed, n) without materializing the whole
    permutation; swaps are tracked sparsely.
    """
    rng = SplitMix64(seed)
    moved = {}
    prefix = []
    for i in range(min(k, n)):
        if i < n - 1:
            j = i + rng.below(n - i)
        else:
            j = i
        vi = moved.get(i, i)
        vj = moved.get(j, j)
        moved[j] = vi
        prefix.append(vj)
    return prefix

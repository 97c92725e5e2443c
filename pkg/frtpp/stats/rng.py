from __future__ import annotations
from dataclasses import dataclass, field
from typing import Tuple
import numpy as np
from ..helper import label_hash64

_MASK64 = (1 << 64) - 1


def splitmix64(value: int) -> int:
    """
    One step of the SplitMix64 generator, used as a 64-bit mixing function.

    state += 0x9E3779B97F4A7C15, then two xor-shift-multiply rounds and a final
    xor-shift. Every intermediate is reduced modulo 2**64.
    """
    z = (value + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix_seed(base_seed: int, label: str) -> int:
    """seed of a labelled stream: splitmix64(base_seed xor blake2b64(label))"""
    return splitmix64((base_seed & _MASK64) ^ label_hash64(label))


@dataclass
class RngStream:
    """
    A deterministic random stream owned by exactly one task.

    The stream wraps a numpy PCG64 generator seeded with `mix_seed(base_seed, label)`.
    Equal (base_seed, label) pairs replay the same draws; different labels give
    independent streams. Streams are mutable and must not be shared between threads
    or processes, derive a new labelled stream per task instead.

    Attributes:
        base_seed (int): The user supplied seed.
        label (str): The stream label, e.g. "none_eta+0.0_tau0.0/rep-3/data".
        generator (np.random.Generator): The underlying generator.
    """
    base_seed: int
    label: str
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.generator = np.random.Generator(np.random.PCG64(mix_seed(self.base_seed, self.label)))

    @property
    def provenance(self) -> Tuple[int, str]:
        return self.base_seed, self.label

    def child(self, label: str) -> RngStream:
        return derive_stream(self.base_seed, f"{self.label}/{label}")


def derive_stream(base_seed: int, label: str) -> RngStream:
    return RngStream(int(base_seed), str(label))

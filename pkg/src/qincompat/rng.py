"""Counter-based random number generation with reproducible parallel streams.

Every variate is a pure function of ``(seed, stream_id, counter)``: the
64-bit counter is pushed through a SplitMix64-style Weyl sequence and
finalizer, so any sample can be generated in isolation, in any order, on
any number of workers.  Consumers reserve a fixed number of counter slots
per logical sample (see ``PAIR_SLOTS``), which is what makes estimates a
deterministic function of ``(seed, n)`` alone.

Counter slot layout for one Bloch measurement (8 slots):

    +0  bias magnitude uniform        +1  bias sign bit
    +2..+5  direction normals (two Box-Muller pairs)
    +6  radius uniform                +7  reserved

A measurement pair occupies ``PAIR_SLOTS = 16`` slots: first operand at
the base counter, second at base + 8.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

# SplitMix64 constants (Weyl increment + Stafford mix13 finalizer).
GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
# Distinct Weyl constant used only for deriving per-stream keys.
STREAM_GAMMA = np.uint64(0xD1B54A32D192ED03)

TWO_PI = 6.283185307179586

_U64 = np.uint64
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

POVM_SLOTS = 8
PAIR_SLOTS = 16
SLOT_BIAS = 0
SLOT_SIGN = 1
SLOT_DIR = 2
SLOT_RADIUS = 6


def mix64(z):
    """SplitMix64 finalizer; accepts uint64 scalars or arrays."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):  # modular 64-bit arithmetic is intended
        z = (z ^ (z >> _U64(30))) * _MIX_A
        z = (z ^ (z >> _U64(27))) * _MIX_B
        return z ^ (z >> _U64(31))


def stream_key(seed: int, stream_id: int) -> np.uint64:
    """Derive the 64-bit key of stream ``stream_id`` under ``seed``."""
    with np.errstate(over="ignore"):
        s = mix64(_U64(seed % (1 << 64)) + GAMMA)
        t = mix64(_U64(stream_id % (1 << 64)) + STREAM_GAMMA)
        return _U64(mix64(s ^ t))


def raw_at(key: np.uint64, counters) -> np.ndarray:
    """Raw 64-bit output at the given counter positions."""
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(_U64(key) + c * GAMMA)


def uniform_at(key: np.uint64, counters) -> np.ndarray:
    """Uniforms in [0, 1) at the given counter positions."""
    return (raw_at(key, counters) >> _U64(11)).astype(np.float64) * _INV53


def open_uniform_at(key: np.uint64, counters) -> np.ndarray:
    """Uniforms in (0, 1); safe as a logarithm argument."""
    return ((raw_at(key, counters) >> _U64(11)).astype(np.float64) + 0.5) * _INV53


def sign_at(key: np.uint64, counters) -> np.ndarray:
    """+-1.0 from the top bit at the given counter positions."""
    return np.where(raw_at(key, counters) >> _U64(63), -1.0, 1.0)


def normals_at(key: np.uint64, counters) -> np.ndarray:
    """Standard normals via Box-Muller.

    ``counters`` has shape (..., 2k); consecutive slot pairs map to normal
    pairs, preserving shape.
    """
    c = np.asarray(counters, dtype=np.uint64)
    if c.shape[-1] % 2:
        raise ValueError("Box-Muller consumes counters in pairs")
    u1 = open_uniform_at(key, c[..., 0::2])
    u2 = uniform_at(key, c[..., 1::2])
    r = np.sqrt(-2.0 * np.log(u1))
    theta = TWO_PI * u2
    out = np.empty(c.shape, dtype=np.float64)
    out[..., 0::2] = r * np.cos(theta)
    out[..., 1::2] = r * np.sin(theta)
    return out


@dataclass(frozen=True)
class RngStream:
    """Value-type handle into the counter sequence of one stream.

    Distinct ``stream_id`` values give statistically independent streams
    under the same seed.  Instances are immutable; use :meth:`advanced`
    to move the counter past consumed slots.
    """

    seed: int
    stream_id: int = 0
    counter: int = 0

    def advanced(self, slots: int) -> "RngStream":
        """Stream positioned ``slots`` counters further along."""
        return replace(self, counter=self.counter + int(slots))

    def substream(self, stream_id: int) -> "RngStream":
        """Fresh stream under the same seed."""
        return RngStream(seed=self.seed, stream_id=stream_id)

    @property
    def key(self) -> np.uint64:
        return stream_key(self.seed, self.stream_id)

"""Counter-based random draws: a keyed hash of (seed, binding, site, coordinate)."""

from __future__ import annotations

import hashlib
import struct
from typing import Any, Sequence

from .errors import DomainError


def uniform(seed: int, binding_id: str, coord: Sequence[Any]) -> float:
    """Uniform float in [0, 1), identical on every platform."""
    key = struct.pack("<Q", seed & 0xFFFFFFFFFFFFFFFF)
    msg = (binding_id + "|" + ",".join(map(str, coord))).encode()
    h = hashlib.blake2b(msg, key=key, digest_size=8).digest()
    return (int.from_bytes(h, "little") >> 11) * (1.0 / (1 << 53))


def seeded_rand(seed: int, binding_id: str, coord: Sequence[Any], x: Any) -> Any:
    """``rand(x)``: integer x draws from 1..x, real x draws from [0, x)."""
    if x <= 0:
        raise DomainError(f"rand({x!r}): bound must be positive")
    u = uniform(seed, binding_id, coord)
    if isinstance(x, int):
        return 1 + min(int(u * x), x - 1)
    return u * x

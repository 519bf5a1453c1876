from __future__ import annotations

import math

from domain.models import BlockPartition
from errors import DomainError


def block_length(n: int) -> int:
    """ceil(ln n): logarithms are natural throughout, so n = 2^10 gives 7."""
    if n < 3:
        raise DomainError(f"block length needs n >= 3, got {n}")
    return math.ceil(math.log(n))


def partition(level_size: int, n: int) -> list[tuple[int, int]]:
    """Contiguous blocks of length ceil(ln n); the last one may be shorter."""
    block_len = block_length(n)
    return [(start, min(start + block_len, level_size)) for start in range(0, level_size, block_len)]


def level_partition(max_level: int, n: int) -> BlockPartition:
    """Blocks for levels -1..max_level. Level -1 is a single one-element block."""
    levels = [partition(1, n)] + [partition(2**j, n) for j in range(max_level + 1)]
    return BlockPartition(block_len=block_length(n), levels=levels)

from blocks.partition import block_length, partition, level_partition
from blocks.statistics import compute_L, compute_L_bruteforce, truncation_threshold, level_statistics
from blocks.concentration import chi_square_tail_bound, check_event_T

__all__ = [
    "block_length", "partition", "level_partition",
    "compute_L", "compute_L_bruteforce", "truncation_threshold", "level_statistics",
    "chi_square_tail_bound", "check_event_T",
]

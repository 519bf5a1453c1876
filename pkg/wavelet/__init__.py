from wavelet.haar import analyze, synthesize, evaluate_expansion, resize_tree
from wavelet.functions import true_coefficients, evaluate_function, tail_energy

__all__ = [
    "analyze", "synthesize", "evaluate_expansion", "resize_tree",
    "true_coefficients", "evaluate_function", "tail_energy",
]

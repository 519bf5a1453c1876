from sequence.model import simulate, rescale_for_estimation, unscale_estimate, estimate_sigma_mad

__all__ = ["simulate", "rescale_for_estimation", "unscale_estimate", "estimate_sigma_mad"]

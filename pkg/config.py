from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Literal


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="TBT_", extra="ignore")

    # Estimator
    default_gamma: float = 7.0
    keep_coarse_max_level: int = 2
    bruteforce_max_block: int = 20

    # Monte Carlo
    default_reps: int = 1000
    lj_reps: int = 10000
    master_seed: int = 20130101
    n_workers: int = 1
    chunk_size: int = 50

    # Risk evaluation
    linf_grid_min: int = 2**14
    tail_extra_levels: int = 8

    # Denoise
    mad_constant: float = 1.4826

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"


settings = Settings()

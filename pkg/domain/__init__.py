from domain.models import (
    BlockPartition,
    CoefficientTree,
    EstimateResult,
    EstimatorConfig,
    FunctionSpec,
    LevelStatistics,
    NoisyCoefficients,
    RiskSample,
    RiskSummary,
    SeedSpec,
)

__all__ = [
    "BlockPartition", "CoefficientTree", "EstimateResult", "EstimatorConfig", "FunctionSpec",
    "LevelStatistics", "NoisyCoefficients", "RiskSample", "RiskSummary", "SeedSpec",
]

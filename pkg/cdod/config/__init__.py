from cdod.config.analysis_config import AnalysisConfig, AnalysisSettings

__all__ = ["AnalysisConfig", "AnalysisSettings"]

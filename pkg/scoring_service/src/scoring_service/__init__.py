from .app import create_app
from .model import ModelInfo, ModelLoadError, ScoringModel

__all__ = ["create_app", "ModelInfo", "ModelLoadError", "ScoringModel"]

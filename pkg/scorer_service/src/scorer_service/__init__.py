from scorer_service.app import app, create_app
from scorer_service.embedders import HashedFeatureEmbedder, build_embedder

__all__ = ["app", "create_app", "HashedFeatureEmbedder", "build_embedder"]

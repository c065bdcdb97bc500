"""FastAPI service wrapping the analysis library, plus the shared handlers
the CLI reuses in-process."""

from .app import create_app

__all__ = ["create_app"]

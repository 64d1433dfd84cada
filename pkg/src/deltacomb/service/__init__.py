"""HTTP service wrapping the pipeline; the CLI reuses its handlers."""

from .app import app, create_app

__all__ = ["app", "create_app"]

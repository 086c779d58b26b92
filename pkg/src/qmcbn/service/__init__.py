"""HTTP service layer: pydantic schemas, handlers, and the FastAPI app."""

from .app import app, create_app

__all__ = ["app", "create_app"]

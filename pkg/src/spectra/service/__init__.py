"""FastAPI service wrapping the spectrum engines."""

from spectra.service.app import app, create_app

__all__ = ["app", "create_app"]

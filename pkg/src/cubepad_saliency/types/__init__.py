"""Shared pydantic base models used by the JSON documents of every sub-package."""

from .common import IgnoreExtraModelMixin, Model

__all__ = ["IgnoreExtraModelMixin", "Model"]

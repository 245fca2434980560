"Shared data models."

from os import PathLike
from pathlib import Path
from typing import Self

from pydantic import BaseModel, ConfigDict, ValidationError

from cubepad_saliency.core.exceptions import DataError, IoError

StrPath = str | PathLike[str]


class Model(BaseModel):
    """Shared base model for JSON documents on disk."""

    model_config = ConfigDict(populate_by_name=True, from_attributes=True)

    @classmethod
    def read_json(cls, path: StrPath) -> Self:
        """Load and validate a document; unreadable files raise IoError, invalid ones DataError."""
        path = Path(path)
        try:
            return cls.model_validate_json(path.read_bytes())
        except OSError as err:
            raise IoError(f"Could not read {path}", detail=str(err)) from err
        except ValidationError as err:
            raise DataError(f"Invalid {cls.__name__} document {path}", detail=str(err)) from err

    def write_json(self, path: StrPath) -> Path:
        path = Path(path)
        try:
            path.write_text(self.model_dump_json(indent=2), encoding="utf-8")
        except OSError as err:
            raise IoError(f"Could not write {path}", detail=str(err)) from err
        return path


class IgnoreExtraModelMixin(BaseModel):
    """Ignore extra parameters."""

    model_config = ConfigDict(extra="ignore")

"""Viewpoint trajectories stored as JSON lines."""

import logging
from collections import defaultdict
from collections.abc import Iterable
from pathlib import Path

from pydantic import ValidationError

from cubepad_saliency.core.exceptions import DataError, IoError
from cubepad_saliency.types.common import StrPath

from .models import Viewpoint, ViewpointRecord

LOG = logging.getLogger(__name__)


def read_viewpoints(path: StrPath) -> list[ViewpointRecord]:
    """Parse a JSON-lines trajectory file; blank lines are skipped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise IoError(f"Could not read {path}", detail=str(err)) from err
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            records.append(ViewpointRecord.model_validate_json(line))
        except ValidationError as err:
            raise DataError(f"{path}:{lineno}: invalid viewpoint record", detail=str(err)) from err
    LOG.debug("Read %d viewpoint records from %s", len(records), path)
    return records


def write_viewpoints(records: Iterable[ViewpointRecord], path: StrPath) -> None:
    """Write one JSON object per line, omitting unset optional fields."""
    lines = [record.model_dump_json(exclude_none=True) for record in records]
    try:
        Path(path).write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
    except OSError as err:
        raise IoError(f"Could not write {path}", detail=str(err)) from err


def viewpoints_by_frame(records: Iterable[ViewpointRecord]) -> dict[int, list[Viewpoint]]:
    """Group records of all viewers by frame index."""
    frames: dict[int, list[Viewpoint]] = defaultdict(list)
    for record in records:
        frames[record.frame].append(record.to_viewpoint())
    return dict(sorted(frames.items()))

"""Throughput benchmark of the static and temporal saliency pipelines."""

import csv
import logging
import math
import platform
import statistics
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from cubepad_saliency import __version__
from cubepad_saliency.core.exceptions import ArgumentError, IoError
from cubepad_saliency.network.manifest import generate_convlstm, generate_network
from cubepad_saliency.network.models import ConvLSTMWeights, NetworkSpec, PipelineMode
from cubepad_saliency.network.pipeline import forward_static, forward_temporal
from cubepad_saliency.tensor.models import EquirectMap
from cubepad_saliency.types.common import StrPath

from .models import OVERLAP_FOV, BenchConfig, BenchEnvironment, BenchMode, BenchReport, BenchRow

LOG = logging.getLogger(__name__)

CSV_COLUMNS = list(BenchRow.model_fields)


def synthetic_frames(p: int, count: int, seed: int = 0, channels: int = 3) -> list[EquirectMap]:
    """Seeded noise with a few bright Gaussian blobs, [channels, p / 2, p] each."""
    rng = np.random.default_rng(seed)
    q = p // 2
    ys, xs = np.indices((q, p), dtype=np.float64)
    frames = []
    for _ in range(count):
        data = 0.2 * rng.random((channels, q, p))
        for _ in range(3):
            cx, cy = rng.uniform(0, p), rng.uniform(0, q)
            radius = rng.uniform(0.02, 0.08) * p
            ddx = np.abs(xs - cx)
            ddx = np.minimum(ddx, p - ddx)
            data += 0.8 * np.exp(-(ddx**2 + (ys - cy) ** 2) / (2.0 * radius**2))
        frames.append(EquirectMap(np.clip(data, 0.0, 1.0).astype(np.float32)))
    return frames


@dataclass
class TimingResult:
    """Wall-clock seconds per frame of one (mode, width) cell."""

    mode: str
    p: int
    seconds: list[float] = field(default_factory=list)
    pixels: int = 0

    @property
    def ok(self) -> bool:
        """True when every run produced a positive duration."""
        return bool(self.seconds) and all(s > 0.0 for s in self.seconds)

    @property
    def median(self) -> float:
        return statistics.median(self.seconds)

    @property
    def fps(self) -> float:
        return 1.0 / self.median if self.ok else math.inf

    def to_row(self) -> BenchRow:
        return BenchRow(
            mode=self.mode,
            p=self.p,
            median_s=self.median,
            min_s=min(self.seconds),
            max_s=max(self.seconds),
            fps=self.fps,
            pixels=self.pixels,
            runs=len(self.seconds),
        )


class BenchRunner:
    """Times forward passes; weights are built once and excluded from the measured region."""

    def __init__(
        self,
        *,
        config: BenchConfig,
        net: NetworkSpec | None = None,
        lstm: ConvLSTMWeights | None = None,
        clock: Callable[[], float] = time.perf_counter,
    ):
        self.config = config
        self.net = net or generate_network(config.network, seed=config.seed)
        self.lstm = lstm
        if self.lstm is None and config.temporal:
            self.lstm = generate_convlstm(self.net.num_classes, seed=config.seed)
        self.clock = clock

    def _time(self, label: str, p: int, run: Callable[[], None], frames: int) -> TimingResult:
        """Warm up, then time ``reps`` runs of ``frames`` frames each."""
        result = TimingResult(mode=label, p=p)
        for _ in range(self.config.warmup):
            run()
        for attempt in range(1, self.config.reps + 1):
            LOG.debug("Bench: %s p=%d - rep %d", label, p, attempt)
            start = self.clock()
            run()
            result.seconds.append((self.clock() - start) / frames)
        LOG.info("Bench: %s p=%d - %.2f fps", label, p, result.fps, extra={"p": p})
        return result

    def time_static(self, mode: BenchMode, p: int) -> TimingResult:
        frames = synthetic_frames(p, self.config.batch, self.config.seed, self.net.in_channels)

        def run() -> None:
            def one(frame: EquirectMap) -> EquirectMap:
                return forward_static(
                    frame, self.net, mode.pipeline_mode, p, p // 2, overlap_fov=OVERLAP_FOV
                )

            if self.config.threads == 1:
                for frame in frames:
                    one(frame)
            else:
                with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                    list(pool.map(one, frames))

        result = self._time(mode.value, p, run, len(frames))
        result.pixels = mode.pixel_workload(p)
        return result

    def time_temporal(self, mode: PipelineMode, p: int) -> TimingResult:
        """ConvLSTM pipeline over one Z-frame window; the window is inherently sequential."""
        if self.lstm is None:
            raise ArgumentError("Temporal timing needs ConvLSTM weights")
        lstm = self.lstm
        frames = synthetic_frames(p, self.config.z, self.config.seed, self.net.in_channels)

        def run() -> None:
            forward_temporal(frames, self.net, lstm, self.config.z, mode=mode)

        label = f"{mode.value}+convlstm"
        result = self._time(label, p, run, len(frames))
        workload = BenchMode.EQUI if mode is PipelineMode.EQUI else BenchMode.CUBEMAP_CP
        result.pixels = workload.pixel_workload(p)
        return result

    def run(self) -> BenchReport:
        rows = [
            self.time_static(mode, p).to_row()
            for p in self.config.widths
            for mode in self.config.modes
        ]
        temporal_rows = []
        if self.config.temporal:
            temporal_rows = [
                self.time_temporal(mode, p).to_row()
                for p in self.config.widths
                for mode in (PipelineMode.CP, PipelineMode.EQUI)
            ]
        ratio = (math.tan(OVERLAP_FOV / 2) / math.tan(math.pi / 4)) ** 2
        return BenchReport(
            rows=rows,
            temporal_rows=temporal_rows,
            overlap_ratio=round(ratio, 6),
            environment=environment_stamp(self.config.threads),
        )


def environment_stamp(threads: int) -> BenchEnvironment:
    return BenchEnvironment(
        threads=threads,
        python=platform.python_version(),
        numpy=np.__version__,
        scipy=scipy.__version__,
        platform=platform.platform(),
        package=__version__,
    )


def write_csv(report: BenchReport, path: StrPath) -> None:
    """One row per (mode, width), static rows first."""
    try:
        with Path(path).open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for row in [*report.rows, *report.temporal_rows]:
                writer.writerow(row.model_dump())
    except OSError as err:
        raise IoError(f"Could not write {path}", detail=str(err)) from err


def write_gnuplot(report: BenchReport, path: StrPath) -> None:
    """Whitespace-separated ``p fps`` columns, one block per mode separated by blank lines."""
    blocks: dict[str, list[BenchRow]] = {}
    for row in [*report.rows, *report.temporal_rows]:
        blocks.setdefault(row.mode, []).append(row)
    lines = [f"# cubepad bench, {report.environment.threads} thread(s)"]
    for mode, rows in blocks.items():
        lines.append(f'"{mode}"')
        lines.extend(f"{row.p} {row.fps:.6g}" for row in sorted(rows, key=lambda r: r.p))
        lines.extend(["", ""])
    try:
        Path(path).write_text("\n".join(lines), encoding="utf-8")
    except OSError as err:
        raise IoError(f"Could not write {path}", detail=str(err)) from err

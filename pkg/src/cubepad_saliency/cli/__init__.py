"""Command line surface and throughput benchmark"""

from .bench import BenchRunner, synthetic_frames, write_csv, write_gnuplot
from .main import build_parser, main
from .models import BenchConfig, BenchMode, BenchReport, BenchRow

__all__ = [
    "BenchConfig",
    "BenchMode",
    "BenchReport",
    "BenchRow",
    "BenchRunner",
    "build_parser",
    "main",
    "synthetic_frames",
    "write_csv",
    "write_gnuplot",
]

"""Command line interface: ``cubepad <verb> ...``.

Exit codes: 0 on success, 1 on data or processing errors, 2 on usage errors.
"""

import argparse
import csv
import logging
import math
import re
import sys
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from pydantic import BaseModel, ValidationError

from cubepad_saliency import __version__
from cubepad_saliency.core.exceptions import (
    EXIT_OK,
    ArgumentError,
    CubePadError,
    DataError,
    exit_code_for,
)
from cubepad_saliency.evaluation.heatmap import gt_heatmap
from cubepad_saliency.evaluation.metrics import evaluate_frame
from cubepad_saliency.evaluation.models import MetricsReport
from cubepad_saliency.evaluation.trajectories import (
    read_viewpoints,
    viewpoints_by_frame,
    write_viewpoints,
)
from cubepad_saliency.network.layers import resize_faces
from cubepad_saliency.network.manifest import (
    generate_convlstm,
    generate_network,
    load_manifest,
    save_manifest,
)
from cubepad_saliency.network.models import NetworkConfig, PipelineMode
from cubepad_saliency.network.pipeline import forward_static, forward_temporal
from cubepad_saliency.pilot.linking import link_trajectory
from cubepad_saliency.pilot.models import CandidateGrid
from cubepad_saliency.pilot.scoring import score_sequence
from cubepad_saliency.sphere.geometry import cubemap_to_equirect, equirect_to_cubemap
from cubepad_saliency.temporal.flow import blob_flow, constant_flow, rotation_flow
from cubepad_saliency.temporal.losses import loss_total
from cubepad_saliency.temporal.models import FlowField, LossReport, LossWeights
from cubepad_saliency.tensor.io import image_export, image_import, tensor_read, tensor_write
from cubepad_saliency.tensor.models import CubeMap, EquirectMap

from .bench import BenchRunner, write_csv, write_gnuplot
from .models import BenchConfig, BenchMode

LOG = logging.getLogger(__name__)

# Preference order when one stem exists in several formats.
IMAGE_SUFFIXES = (".cpt", ".pfm", ".png")
FRAME_DIGITS = re.compile(r"\d+$")


# ----------------------------
# helpers
# ----------------------------


def _list_images(directory: Path) -> list[Path]:
    if not directory.is_dir():
        raise DataError(f"{directory} is not a directory")
    by_stem: dict[str, Path] = {}
    for path in sorted(directory.iterdir()):
        suffix = path.suffix.lower()
        if suffix not in IMAGE_SUFFIXES:
            continue
        kept = by_stem.get(path.stem)
        rank = IMAGE_SUFFIXES.index(suffix)
        if kept is None or rank < IMAGE_SUFFIXES.index(kept.suffix.lower()):
            by_stem[path.stem] = path
    files = [by_stem[stem] for stem in sorted(by_stem)]
    if not files:
        raise DataError(f"No .png, .pfm or .cpt images in {directory}")
    return files


def _frame_number(path: Path) -> int | None:
    """Frame number carried by the trailing digits of a file stem (``frame_00012`` -> 12)."""
    match = FRAME_DIGITS.search(path.stem)
    return int(match.group()) if match else None


def _frames_by_number(files: Sequence[Path]) -> dict[int, Path]:
    frames: dict[int, Path] = {}
    for path in files:
        number = _frame_number(path)
        if number is None:
            LOG.warning("Skipping %s: no frame number in its name", path.name)
            continue
        if number in frames:
            raise DataError(f"{frames[number].name} and {path.name} both hold frame {number}")
        frames[number] = path
    return frames


def _emit(
    args: argparse.Namespace, document: BaseModel, rows: Sequence[BaseModel] | None = None
) -> None:
    """Print a document as JSON, or its rows as CSV with ``--format csv``."""
    if args.format == "csv" and rows is not None:
        fieldnames = list(type(rows[0]).model_fields) if rows else []
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.model_dump())
        return
    print(document.model_dump_json(indent=2, by_alias=True))


def _map_output(out_dir: Path, stem: str, saliency: EquirectMap, colormap: bool) -> None:
    tensor_write(saliency, out_dir / f"{stem}.cpt")
    image_export(saliency, out_dir / f"{stem}.png", colormap=colormap)


# ----------------------------
# verbs
# ----------------------------


def cmd_project(args: argparse.Namespace) -> int:
    """Equirectangular image -> cubemap CPT1 tensor [6, c, w, w]."""
    frame = image_import(args.input)
    if not frame.is_canonical:
        raise ArgumentError(f"Projection needs p = 2q, got {frame.width}x{frame.height}")
    width = args.face_width or frame.width // 4
    cube = equirect_to_cubemap(frame, width)
    tensor_write(cube, args.output)
    LOG.info("Projected %s onto faces of width %d", args.input, width)
    return EXIT_OK


def cmd_unproject(args: argparse.Namespace) -> int:
    """Cubemap CPT1 tensor -> equirectangular image."""
    cube = CubeMap(tensor_read(args.input).data)
    p = args.width or 4 * cube.face_width
    q = args.height or p // 2
    image_export(cubemap_to_equirect(cube, p, q), args.output)
    return EXIT_OK


def cmd_saliency(args: argparse.Namespace) -> int:
    """Predict one saliency map per frame; ``--temporal Z`` engages the ConvLSTM."""
    files = _list_images(Path(args.frames))
    net, lstm = load_manifest(args.manifest)
    frames = [image_import(path) for path in files]
    p = args.width or frames[0].width
    q = args.height or p // 2
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    mode = PipelineMode(args.mode)

    if args.temporal is not None:
        if lstm is None:
            raise DataError(f"Manifest {args.manifest} has no ConvLSTM weights")
        maps = forward_temporal(
            frames, net, lstm, args.temporal, mode=mode, p=p, q=q, class_index=args.class_index
        )
    else:

        def one(frame: EquirectMap) -> EquirectMap:
            return forward_static(
                frame,
                net,
                mode,
                p,
                q,
                class_index=args.class_index,
                overlap_fov=math.radians(args.overlap_fov),
            )

        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            maps = list(pool.map(one, frames))
    for path, saliency in zip(files, maps):
        _map_output(out_dir, path.stem, saliency, args.colormap)
    LOG.info("Wrote %d saliency maps to %s", len(maps), out_dir)
    return EXIT_OK


def cmd_loss(args: argparse.Namespace) -> int:
    """Temporal loss of a map sequence; flow ``<stem>.cpt`` carries the previous map to map stem."""
    weights = LossWeights(
        lambda_r=args.lambda_r,
        lambda_s=args.lambda_s,
        lambda_m=args.lambda_m,
        epsilon=args.epsilon,
        z=args.z,
    )
    files = _list_images(Path(args.maps))
    maps = [image_import(path) for path in files]

    def read_flow(path: Path) -> FlowField:
        flow_path = Path(args.flows) / f"{path.stem}.cpt"
        if not flow_path.is_file():
            raise DataError(f"Missing flow file {flow_path}")
        return FlowField(tensor_read(flow_path).data)

    windows = []
    for start in range(0, len(maps), weights.z):
        stop = min(start + weights.z, len(maps))
        # flows across a window boundary are never read
        flows = [read_flow(path) for path in files[start + 1 : stop]]
        windows.append(loss_total(maps[start:stop], flows, weights))
    _emit(args, LossReport.from_windows(weights, windows))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    """Score predicted maps against heatmaps built from viewpoint trajectories."""
    records = read_viewpoints(args.trajectories)
    if not records:
        raise DataError(f"Trajectory file {args.trajectories} holds no viewpoints")
    predictions = _frames_by_number(_list_images(Path(args.predictions)))
    scored = []
    for frame, viewpoints in viewpoints_by_frame(records).items():
        if frame not in predictions:
            raise DataError(f"No prediction for trajectory frame {frame} in {args.predictions}")
        pred = image_import(predictions[frame])
        if args.width:
            height = args.height or args.width // 2
            pred = EquirectMap(resize_faces(pred.data, height, args.width))
        heat = gt_heatmap(viewpoints, pred.width, pred.height, args.sigma)
        scored.append(evaluate_frame(frame, pred, heat, n_splits=args.splits, seed=args.seed))
    report = MetricsReport.from_frames(scored)
    _emit(args, report, list(report.frames))
    return EXIT_OK


def cmd_pilot(args: argparse.Namespace) -> int:
    """Pick a smooth salient NFoV trajectory over a saliency map sequence."""
    files = _list_images(Path(args.saliency))
    grid = CandidateGrid.regular(args.lon_step, args.lat_step, args.lat_limit, args.fov)
    scores = score_sequence([image_import(p) for p in files], grid, channel=args.class_index)
    trajectory = link_trajectory(scores, grid, math.radians(args.d_max))
    numbers = [n for n in map(_frame_number, files) if n is not None]
    frames = numbers if len(numbers) == len(files) else None
    write_viewpoints(trajectory.to_records(frames=frames), args.output)
    LOG.info("Piloted %d frames, total score %.4f", len(files), trajectory.total)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Time the static pipelines (and optionally the ConvLSTM pipelines)."""
    if args.config:
        config = BenchConfig.read_json(args.config)
    else:
        config = BenchConfig()
    overrides: dict[str, object] = {"threads": args.threads, "seed": args.seed}
    if args.widths:
        overrides["widths"] = args.widths
    if args.modes:
        overrides["modes"] = [BenchMode(m) for m in args.modes]
    if args.reps is not None:
        overrides["reps"] = args.reps
    if args.temporal:
        overrides["temporal"] = True
    config = BenchConfig.model_validate({**config.model_dump(), **overrides})
    report = BenchRunner(config=config).run()
    if args.csv:
        write_csv(report, args.csv)
    if args.gnuplot:
        write_gnuplot(report, args.gnuplot)
    _emit(args, report, [*report.rows, *report.temporal_rows])
    return EXIT_OK


def cmd_gen_weights(args: argparse.Namespace) -> int:
    """Write a seeded toy network manifest."""
    if args.config:
        config = NetworkConfig.read_json(args.config)
    else:
        config = NetworkConfig()
    net = generate_network(config, seed=args.seed)
    lstm = None
    if config.convlstm or args.convlstm:
        lstm = generate_convlstm(net.num_classes, seed=args.seed)
    path = save_manifest(args.output, net, lstm)
    print(path)
    return EXIT_OK


def cmd_gen_flow(args: argparse.Namespace) -> int:
    """Write a synthetic [2, q, p] flow field."""
    q = args.height or args.width // 2
    if args.kind == "constant":
        flow = constant_flow(args.width, q, args.dx, args.dy)
    elif args.kind == "rotation":
        flow = rotation_flow(args.width, q, args.degrees)
    else:
        center = (
            args.center_x if args.center_x is not None else args.width / 2,
            args.center_y if args.center_y is not None else q / 2,
        )
        flow = blob_flow(args.width, q, center, args.radius, (args.dx, args.dy))
    tensor_write(flow, args.output)
    return EXIT_OK


def cmd_gen_gt(args: argparse.Namespace) -> int:
    """Render ground-truth heatmaps, one per trajectory frame."""
    records = read_viewpoints(args.trajectories)
    if not records:
        raise DataError(f"Trajectory file {args.trajectories} holds no viewpoints")
    q = args.height or args.width // 2
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for frame, viewpoints in viewpoints_by_frame(records).items():
        heat = gt_heatmap(viewpoints, args.width, q, args.sigma)
        _map_output(out_dir, f"frame_{frame:05d}", heat, args.colormap)
    return EXIT_OK


# ----------------------------
# parser
# ----------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubepad", description="Cube padding saliency toolkit for 360° video."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=0, help="Seed of every random draw")
    parser.add_argument("--threads", type=_positive_int, default=1, help="Worker threads")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="Report format")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only log errors")
    verbs = parser.add_subparsers(dest="verb", required=True)

    sub = verbs.add_parser("project", help="Equirect image to cubemap tensor")
    sub.add_argument("input")
    sub.add_argument("output", help="Output .cpt file")
    sub.add_argument("--face-width", type=_positive_int, default=None, help="Default p / 4")
    sub.set_defaults(handler=cmd_project)

    sub = verbs.add_parser("unproject", help="Cubemap tensor to equirect image")
    sub.add_argument("input", help="Cubemap .cpt file")
    sub.add_argument("output", help="Output .png, .pfm or .cpt file")
    sub.add_argument("--width", type=_positive_int, default=None, help="Default 4w")
    sub.add_argument("--height", type=_positive_int, default=None, help="Default width / 2")
    sub.set_defaults(handler=cmd_unproject)

    sub = verbs.add_parser("saliency", help="Predict saliency maps for a frame directory")
    sub.add_argument("frames", help="Directory of equirect frames")
    sub.add_argument("manifest", help="Network manifest file or directory")
    sub.add_argument("output", help="Output directory")
    sub.add_argument("--mode", choices=[m.value for m in PipelineMode], default="cp")
    sub.add_argument("--temporal", type=_positive_int, default=None, metavar="Z")
    sub.add_argument("--width", type=_positive_int, default=None)
    sub.add_argument("--height", type=_positive_int, default=None)
    sub.add_argument("--class", dest="class_index", type=int, default=None)
    sub.add_argument("--overlap-fov", type=float, default=120.0, help="Degrees")
    sub.add_argument("--colormap", action="store_true", help="Color PNG output")
    sub.set_defaults(handler=cmd_saliency)

    sub = verbs.add_parser("loss", help="Temporal loss of a map sequence")
    sub.add_argument("maps", help="Directory of saliency maps")
    sub.add_argument("flows", help="Directory of <map stem>.cpt flow fields")
    defaults = LossWeights()
    sub.add_argument("--lambda-r", type=float, default=defaults.lambda_recons)
    sub.add_argument("--lambda-s", type=float, default=defaults.lambda_smooth)
    sub.add_argument("--lambda-m", type=float, default=defaults.lambda_motion)
    sub.add_argument("--epsilon", type=float, default=defaults.epsilon, help="Pixels")
    sub.add_argument("--z", type=_positive_int, default=defaults.z)
    sub.set_defaults(handler=cmd_loss)

    sub = verbs.add_parser("eval", help="Score predictions against viewer trajectories")
    sub.add_argument("predictions", help="Directory of predicted maps, one per frame")
    sub.add_argument("trajectories", help="Viewpoint JSON-lines file")
    sub.add_argument("--width", type=_positive_int, default=None)
    sub.add_argument("--height", type=_positive_int, default=None)
    sub.add_argument("--sigma", type=float, default=5.0, help="Gaussian sigma in degrees")
    sub.add_argument("--splits", type=_positive_int, default=100, help="AUC-Borji splits")
    sub.set_defaults(handler=cmd_eval)

    sub = verbs.add_parser("pilot", help="Link salient NFoV viewpoints into a trajectory")
    sub.add_argument("saliency", help="Directory of saliency maps")
    sub.add_argument("output", help="Output JSON-lines trajectory")
    sub.add_argument("--lon-step", type=float, default=10.0)
    sub.add_argument("--lat-step", type=float, default=10.0)
    sub.add_argument("--lat-limit", type=float, default=45.0)
    sub.add_argument("--fov", type=float, default=90.0)
    sub.add_argument("--d-max", type=float, default=15.0, help="Degrees per frame")
    sub.add_argument("--class", dest="class_index", type=int, default=0)
    sub.set_defaults(handler=cmd_pilot)

    sub = verbs.add_parser("bench", help="Throughput benchmark")
    sub.add_argument("--config", default=None, help="BenchConfig JSON file")
    sub.add_argument("--widths", type=_positive_int, nargs="+", default=None)
    sub.add_argument("--modes", choices=[m.value for m in BenchMode], nargs="+", default=None)
    sub.add_argument("--reps", type=_positive_int, default=None)
    sub.add_argument("--temporal", action="store_true")
    sub.add_argument("--csv", default=None, help="Also write the table as CSV")
    sub.add_argument("--gnuplot", default=None, help="Also write a gnuplot .dat file")
    sub.set_defaults(handler=cmd_bench)

    sub = verbs.add_parser("gen-weights", help="Seeded toy network manifest")
    sub.add_argument("output", help="Output directory")
    sub.add_argument("--config", default=None, help="NetworkConfig JSON file")
    sub.add_argument("--convlstm", action="store_true", help="Include ConvLSTM weights")
    sub.set_defaults(handler=cmd_gen_weights)

    sub = verbs.add_parser("gen-flow", help="Synthetic flow field")
    sub.add_argument("output", help="Output .cpt file")
    sub.add_argument("--kind", choices=("constant", "rotation", "blob"), default="constant")
    sub.add_argument("--width", type=_positive_int, required=True)
    sub.add_argument("--height", type=_positive_int, default=None)
    sub.add_argument("--dx", type=float, default=0.0)
    sub.add_argument("--dy", type=float, default=0.0)
    sub.add_argument("--degrees", type=float, default=0.0, help="Rotation per frame")
    sub.add_argument("--center-x", type=float, default=None)
    sub.add_argument("--center-y", type=float, default=None)
    sub.add_argument("--radius", type=float, default=8.0)
    sub.set_defaults(handler=cmd_gen_flow)

    sub = verbs.add_parser("gen-gt", help="Ground-truth heatmaps from trajectories")
    sub.add_argument("trajectories", help="Viewpoint JSON-lines file")
    sub.add_argument("output", help="Output directory")
    sub.add_argument("--width", type=_positive_int, required=True)
    sub.add_argument("--height", type=_positive_int, default=None)
    sub.add_argument("--sigma", type=float, default=5.0)
    sub.add_argument("--colormap", action="store_true")
    sub.set_defaults(handler=cmd_gen_gt)
    return parser


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """Run one verb and return its exit code; argparse exits with 2 on bad usage."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose, args.quiet)
    try:
        return int(args.handler(args))
    except (CubePadError, ValidationError, OSError, ValueError) as exc:
        LOG.error("%s: %s", args.verb, getattr(exc, "message", exc))
        return exit_code_for(exc)

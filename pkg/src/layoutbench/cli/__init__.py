"""
Command line
~~~~~~~~~~~~

The ``layoutbench`` binary::

    > layoutbench gen --task sorting --count 100 --seed 42 --out sorting.jsonl
    > layoutbench solve sorting.jsonl --out predictions.jsonl --traces traces.jsonl
    > layoutbench eval sorting.jsonl predictions.jsonl --format json
    > layoutbench score traces.jsonl sorting.jsonl
    > layoutbench render sorting.jsonl --out renders/
    > layoutbench selftest

Flags left unset fall back to the settings (``--settings`` or
``LAYOUTBENCH_SETTINGS``), which fall back to the package defaults.

"""

import contextlib
import json
import logging
import sys
from collections import Counter
from collections.abc import Iterator, Mapping, Sequence
from pathlib import Path
from typing import TextIO

from .. import __version__
from ..app import EXIT_DATA_ERROR, EXIT_INTERNAL_ERROR, Arg, CliApplication, CommandOptions
from ..app.argument_types import FractionType, PositiveInt, RangeType
from ..benchgen import generate, read_dataset, render_prompt, write_dataset
from ..benchgen.dataset import write_lines
from ..conf import settings
from ..exceptions import DatasetError
from ..scene_graph import Axis, canonical_json, parse_scene_graph
from ..tasks import TaskKind
from . import pipeline
from .config import ReportFormat, RunConfig
from .records import RecordStatus, iter_traces, read_predictions, write_predictions
from .render import render_svg
from .report import write_report

__all__ = ("app", "main")

logger = logging.getLogger(__name__)

app = CliApplication(
    prog="layoutbench",
    description="Deterministic 3D layout editing benchmark tooling",
    version=__version__,
)


@contextlib.contextmanager
def open_output(path: Path | None) -> Iterator[TextIO]:
    """Text file at ``path``, or stdout when no path is given."""
    if path is None:
        yield sys.stdout
        return
    try:
        f = open(path, "w", encoding="utf-8", newline="\n")  # noqa: SIM115
    except OSError as ex:
        raise DatasetError(path, ex.strerror or str(ex)) from ex
    with f:
        yield f


def _write_text(path: Path, text: str):
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as ex:
        raise DatasetError(path, ex.strerror or str(ex)) from ex


def _processes(parallelism: int | None) -> int:
    return parallelism or settings.PARALLELISM


@app.command
def gen(
    *,
    task: TaskKind = Arg(help="Task to generate."),
    out: Path = Arg(help="Manifest (JSON Lines) to write."),
    count: PositiveInt() = Arg(default=None, help="Instances to generate; defaults to DEFAULT_COUNTS."),
    seed: int | None = Arg(default=None, help="Batch seed; defaults to SEED."),
    objects: RangeType(minimum=1) = Arg(default=None, help="Sorting: objects per scene, N or LO:HI."),
    groups: RangeType(minimum=1) = Arg(default=None, help="Sorting: groups per scene, N or LO:HI."),
    rows: RangeType(minimum=1) = Arg(default=None, help="Alignment: grid rows, N or LO:HI."),
    cols: RangeType(minimum=2) = Arg(default=None, help="Alignment: grid columns, N or LO:HI."),
    perturb: RangeType(minimum=0) = Arg(default=None, help="Alignment: perturbed fraction, F or LO:HI."),
    existing: RangeType(minimum=2) = Arg(default=None, help="Room editing: objects already in the room."),
    refs: RangeType(minimum=2) = Arg(default=None, help="Room editing: reference objects (2 or 3)."),
    param: Mapping[str, str] = Arg(help="Extra generator parameter; repeatable."),
    parallelism: PositiveInt() = Arg(default=None, help="Worker processes; defaults to PARALLELISM."),
):
    """
    Generate a benchmark manifest.
    """
    count = count or settings.DEFAULT_COUNTS[task.value]
    seed = settings.SEED if seed is None else seed
    sizes = {
        name: value
        for name, value in {
            "objects": objects,
            "groups": groups,
            "rows": rows,
            "cols": cols,
            "perturb": perturb,
            "existing": existing,
            "refs": refs,
        }.items()
        if value is not None
    }

    instances = generate(task, count, seed, sizes=sizes, extra=param, processes=_processes(parallelism))
    write_dataset(instances, out)

    mix = Counter(instance.task.value for instance in instances)
    print(f"Wrote {len(instances)} instance(s) to {out}")
    print(f"  seed: {seed}")
    print("  tasks: " + ", ".join(f"{name}={number}" for name, number in sorted(mix.items())))


@app.command
def solve(
    manifest: Path,
    *,
    out: Path = Arg(help="Predictions (JSON Lines) to write."),
    traces: Path | None = Arg(default=None, help="Also write canonical reasoning traces here."),
    use_hints: bool = Arg(help="Let the alignment oracle read the grid spec."),
    parallelism: PositiveInt() = Arg(default=None, help="Worker processes; defaults to PARALLELISM."),
):
    """
    Solve every manifest instance with the oracle solvers.
    """
    instances = read_dataset(manifest)
    outcomes = pipeline.solve_all(
        instances,
        use_hints=use_hints,
        traces=traces is not None,
        processes=_processes(parallelism),
        outlier_fraction=settings.ALIGNMENT_OUTLIER_FRACTION,
        tolerance=settings.PLACEMENT_TOLERANCE,
        max_iterations=settings.PLACEMENT_MAX_ITERATIONS,
    )
    write_predictions((outcome.record for outcome in outcomes), out)
    if traces is not None:
        write_lines(
            traces,
            (
                canonical_json({"id": outcome.record.id, "raw_text": outcome.trace})
                for outcome in sorted(outcomes, key=lambda outcome: outcome.record.id)
                if outcome.trace is not None
            ),
        )

    failed = [outcome.record.id for outcome in outcomes if outcome.record.status is RecordStatus.FAILED]
    print(f"Solved {len(outcomes) - len(failed)} of {len(outcomes)} instance(s); predictions in {out}")
    if failed:
        logger.error("%d instance(s) failed: %s", len(failed), ", ".join(failed[:10]))
        return EXIT_DATA_ERROR
    return None


@app.command(name="eval")
def eval_(
    manifest: Path,
    predictions: Path,
    opts: CommandOptions,
    *,
    out: Path | None = Arg(default=None, help="Report file; defaults to stdout."),
    report_format: ReportFormat | None = Arg("--format", default=None, help="Report format."),
    iou_threshold: Sequence[FractionType(open_low=True, open_high=True)] = Arg(
        default=None, help="IoU@x threshold; repeatable."
    ),
    collision_eps: float | None = Arg(default=None, help="Collision volume threshold (m³)."),
    sort_axis: Axis | None = Arg(default=None, help="Axis for the sorting edit distance."),
    parallelism: PositiveInt() = Arg(default=None, help="Worker processes; defaults to PARALLELISM."),
):
    """
    Evaluate predictions against the manifest targets.
    """
    config = RunConfig.from_settings(
        collision_eps=collision_eps,
        iou_thresholds=iou_threshold,
        sort_axis=sort_axis,
        report_format=report_format,
        parallelism=parallelism,
    )
    reports = pipeline.evaluate(read_dataset(manifest), read_predictions(predictions), config)
    with open_output(out) as f_out:
        write_report(reports, config, no_color=opts.no_color or out is not None, f_out=f_out)


@app.command
def score(
    traces: Path,
    manifest: Path,
    *,
    out: Path | None = Arg(default=None, help="Reward stream (JSON Lines); defaults to stdout."),
    lambda1: float | None = Arg(default=None, help="Collision term weight."),
    lambda2: float | None = Arg(default=None, help="Format term weight."),
    collision_eps: float | None = Arg(default=None, help="Collision volume threshold (m³)."),
    parallelism: PositiveInt() = Arg(default=None, help="Worker processes; defaults to PARALLELISM."),
):
    """
    Score reasoning traces with the composite reward.
    """
    config = RunConfig.from_settings(
        lambda1=lambda1, lambda2=lambda2, collision_eps=collision_eps, parallelism=parallelism
    )
    scored = pipeline.score_traces(list(iter_traces(traces)), read_dataset(manifest), config)
    with open_output(out) as f_out:
        for record_id, report in scored:
            f_out.write(canonical_json({"id": record_id, **report.as_dict()}) + "\n")

    summary = pipeline.summarize_rewards(scored)
    if summary.count:
        print(
            f"Scored {summary.count} rollout(s): mean {summary.mean:.6f}, "
            f"min {summary.minimum:.6f}, max {summary.maximum:.6f}",
            file=sys.stderr,
        )
    else:
        print("No rollouts scored", file=sys.stderr)


@app.command
def render(
    source: Path,
    *,
    out: Path = Arg(help="SVG file for a graph, or a directory for a manifest."),
):
    """
    Render a scene graph file or every manifest record as top-down SVG.
    """
    if source.suffix == ".jsonl":
        instances = read_dataset(source)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as ex:
            raise DatasetError(out, ex.strerror or str(ex)) from ex
        for instance in instances:
            _write_text(out / f"{instance.id}-initial.svg", render_svg(instance.initial_graph, f"{instance.id} initial"))
            _write_text(out / f"{instance.id}-target.svg", render_svg(instance.target_graph, f"{instance.id} target"))
        print(f"Rendered {len(instances)} instance(s) into {out}")
        return

    try:
        text = source.read_bytes()
    except OSError as ex:
        raise DatasetError(source, ex.strerror or str(ex)) from ex
    _write_text(out, render_svg(parse_scene_graph(text), source.stem))
    print(f"Rendered {source} to {out}")


@app.command
def prompt(
    manifest: Path,
    *,
    out: Path | None = Arg(default=None, help="Prompt file (JSON Lines); defaults to stdout."),
):
    """
    Write the model prompt of every manifest record.
    """
    instances = read_dataset(manifest)
    with open_output(out) as f_out:
        for instance in instances:
            f_out.write(canonical_json({"id": instance.id, "prompt": render_prompt(instance)}) + "\n")


@app.command
def verify(
    manifest: Path,
    predictions: Path,
    *,
    out: Path | None = Arg(default=None, help="Per-constraint results (JSON Lines); defaults to stdout."),
    parallelism: PositiveInt() = Arg(default=None, help="Worker processes; defaults to PARALLELISM."),
):
    """
    Check predictions against each instance's constraints directly.
    """
    reports = pipeline.verify_all(
        read_dataset(manifest), read_predictions(predictions), _processes(parallelism)
    )
    with open_output(out) as f_out:
        for report in reports:
            f_out.write(json.dumps(report.as_dict(), sort_keys=True) + "\n")

    failed = [report.instance_id for report in reports if not report.passed]
    print(f"{len(reports) - len(failed)} of {len(reports)} instance(s) passed", file=sys.stderr)
    if failed:
        logger.error("Failed constraints in: %s", ", ".join(failed[:10]))
        return EXIT_DATA_ERROR
    return None


@app.command(loglevel=logging.WARNING)
def selftest(
    opts: CommandOptions,
    *,
    tag: Sequence[str] = Arg(default=None, help="Only run suites with this tag; repeatable."),
    verbose: bool = Arg(help="List every check as it runs."),
    table: bool = Arg(help="Tab separated output."),
):
    """
    Run the embedded invariant suites.
    """
    from ..checks.report import execute_report

    failed = execute_report(
        sys.stdout,
        tags=tag,
        verbose=verbose,
        no_color=opts.no_color,
        table=table,
        header=app.application_summary,
    )
    return EXIT_INTERNAL_ERROR if failed else None


def main(args: Sequence[str] | None = None):
    app.dispatch(args)

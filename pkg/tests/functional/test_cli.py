import json

import pytest
from layoutbench.app import EXIT_DATA_ERROR, EXIT_USAGE
from layoutbench.benchgen import read_dataset
from layoutbench.cli import main
from layoutbench.cli.records import read_predictions
from layoutbench.conf import settings


def run(*args) -> int:
    try:
        main([str(arg) for arg in args])
    except SystemExit as ex:
        return ex.code
    return 0


@pytest.fixture
def manifest(tmp_path):
    path = tmp_path / "sorting.jsonl"
    assert run("gen", "--task", "sorting", "--count", 3, "--seed", 42, "--out", path) == 0
    return path


@pytest.fixture
def predictions(tmp_path, manifest):
    path = tmp_path / "predictions.jsonl"
    assert run("solve", manifest, "--out", path, "--traces", tmp_path / "traces.jsonl") == 0
    return path


class TestGen:
    def test_writes_manifest(self, capsys, manifest):
        out = capsys.readouterr().out

        assert f"Wrote 3 instance(s) to {manifest}" in out
        assert [instance.id for instance in read_dataset(manifest)] == [
            "sorting-42-000000",
            "sorting-42-000001",
            "sorting-42-000002",
        ]

    def test_deterministic(self, tmp_path):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"

        for path in (first, second):
            run("gen", "--task", "alignment", "--count", 4, "--seed", 7, "--rows", "2:3", "--out", path)

        assert first.read_bytes() == second.read_bytes()

    def test_pool_size_does_not_change_output(self, tmp_path):
        single, pooled = tmp_path / "single.jsonl", tmp_path / "pooled.jsonl"

        run("gen", "--task", "roomedit", "--count", 3, "--seed", 5, "--out", single, "--parallelism", 1)
        run("gen", "--task", "roomedit", "--count", 3, "--seed", 5, "--out", pooled, "--parallelism", 2)

        assert single.read_bytes() == pooled.read_bytes()

    def test_invalid_task(self, tmp_path):
        assert run("gen", "--task", "stacking", "--out", tmp_path / "x.jsonl") == EXIT_USAGE

    def test_settings_file(self, tmp_path):
        settings_file = tmp_path / "bench.json"
        settings_file.write_text(json.dumps({"SEED": 11, "DEFAULT_COUNTS": {"alignment": 2}}))
        out = tmp_path / "alignment.jsonl"

        with settings.modify() as patch:
            patch.reset_settings()
            assert run("--settings", settings_file, "gen", "--task", "alignment", "--out", out) == 0

        assert [instance.id for instance in read_dataset(out)] == ["alignment-11-000000", "alignment-11-000001"]


class TestSolve:
    def test_predictions_and_traces(self, capsys, tmp_path, manifest, predictions):
        assert "Solved 3 of 3 instance(s)" in capsys.readouterr().out
        records = read_predictions(predictions)
        assert [record.graph() for record in records] == [instance.target_graph for instance in read_dataset(manifest)]
        assert len((tmp_path / "traces.jsonl").read_text().splitlines()) == 3

    def test_bad_manifest(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text("{not json\n")

        assert run("solve", path, "--out", tmp_path / "predictions.jsonl") == EXIT_DATA_ERROR

    def test_missing_manifest(self, tmp_path):
        assert run("solve", tmp_path / "missing.jsonl", "--out", tmp_path / "p.jsonl") == EXIT_DATA_ERROR


class TestEval:
    def test_table(self, manifest, predictions, capsys):
        capsys.readouterr()

        assert run("--nocolor", "eval", manifest, predictions) == 0

        out = capsys.readouterr().out
        assert out.startswith("# config: {")
        assert "\nsorting  scenes=3 missing=0 failed=0\n" in out
        assert "   1.000       0.000      1.000       0.000" in out

    def test_json_file(self, tmp_path, manifest, predictions):
        report = tmp_path / "report.json"

        run("eval", manifest, predictions, "--format", "json", "--iou-threshold", 0.25, "--out", report)

        actual = json.loads(report.read_text())
        assert actual["config"]["iou_thresholds"] == [0.25]
        assert actual["tasks"]["sorting"]["headline"]["Mean IoU"] == 1.0

    def test_missing_predictions(self, tmp_path, manifest, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        capsys.readouterr()

        assert run("--nocolor", "eval", manifest, empty, "--format", "csv") == 0

        assert capsys.readouterr().out.splitlines()[2].startswith("sorting,3,3,0,0.000000")

    def test_unreadable_prediction_lines(self, tmp_path, manifest, predictions):
        first = predictions.read_text().splitlines()[0]
        mixed = tmp_path / "mixed.jsonl"
        mixed.write_text(f'{first}\n{{"id":"sorting-42-000001","final_graph":\n{{not json\n')
        report = tmp_path / "report.json"

        assert run("eval", manifest, mixed, "--format", "json", "--out", report) == 0

        sorting = json.loads(report.read_text())["tasks"]["sorting"]
        assert (sorting["scenes"], sorting["missing"], sorting["failed"]) == (3, 1, 1)
        assert sorting["headline"]["Mean IoU"] == pytest.approx(1 / 3, abs=1e-6)
        failed = [scene for scene in sorting["scenes_detail"] if scene["status"] == "failed"]
        assert [scene["id"] for scene in failed] == ["sorting-42-000001"]
        assert failed[0]["note"].startswith("unreadable record: invalid JSON")

    def test_unknown_prediction_id(self, tmp_path, manifest):
        stray = tmp_path / "stray.jsonl"
        stray.write_text('{"id":"sorting-42-999999","raw_text":""}\n')

        assert run("eval", manifest, stray) == EXIT_DATA_ERROR

    def test_invalid_threshold(self, manifest, predictions):
        assert run("eval", manifest, predictions, "--iou-threshold", 1.5) == EXIT_USAGE


class TestScore:
    def test_rewards(self, tmp_path, manifest, predictions, capsys):
        rewards = tmp_path / "rewards.jsonl"
        capsys.readouterr()

        assert run("score", tmp_path / "traces.jsonl", manifest, "--out", rewards) == 0

        lines = [json.loads(line) for line in rewards.read_text().splitlines()]
        assert [line["composite"] for line in lines] == [pytest.approx(1.4)] * 3
        assert "Scored 3 rollout(s): mean 1.400000" in capsys.readouterr().err

    def test_weights(self, tmp_path, manifest, predictions):
        rewards = tmp_path / "rewards.jsonl"

        run("score", tmp_path / "traces.jsonl", manifest, "--out", rewards, "--lambda1", 0, "--lambda2", 0)

        assert all(json.loads(line)["composite"] == pytest.approx(1.0) for line in rewards.read_text().splitlines())

    def test_empty(self, tmp_path, manifest, capsys):
        traces = tmp_path / "none.jsonl"
        traces.write_text("")

        assert run("score", traces, manifest) == 0
        assert "No rollouts scored" in capsys.readouterr().err


class TestVerify:
    def test_passes(self, tmp_path, manifest, predictions, capsys):
        out = tmp_path / "verify.jsonl"

        assert run("verify", manifest, predictions, "--out", out) == 0

        assert all(json.loads(line)["passed"] for line in out.read_text().splitlines())
        assert "3 of 3 instance(s) passed" in capsys.readouterr().err

    def test_fails(self, tmp_path, manifest):
        (first, *_) = read_dataset(manifest)
        initial = tmp_path / "initial.jsonl"
        initial.write_text(json.dumps({"id": first.id, "final_graph": json.loads(first.to_json())["initial_graph"]}))

        assert run("verify", manifest, initial) == EXIT_DATA_ERROR


class TestRenderAndPrompt:
    def test_render_manifest(self, tmp_path, manifest):
        out = tmp_path / "renders"

        assert run("render", manifest, "--out", out) == 0

        assert len(list(out.glob("*-initial.svg"))) == 3
        assert (out / "sorting-42-000000-target.svg").read_text().startswith("<?xml")

    def test_render_graph(self, tmp_path, manifest):
        (first, *_) = read_dataset(manifest)
        source = tmp_path / "scene.json"
        source.write_text(json.dumps(json.loads(first.to_json())["target_graph"]))

        assert run("render", source, "--out", tmp_path / "scene.svg") == 0

        assert "<title>scene</title>" in (tmp_path / "scene.svg").read_text()

    def test_prompt(self, tmp_path, manifest):
        out = tmp_path / "prompts.jsonl"

        assert run("prompt", manifest, "--out", out) == 0

        lines = [json.loads(line) for line in out.read_text().splitlines()]
        assert [line["id"] for line in lines] == [f"sorting-42-00000{i}" for i in range(3)]
        assert all(line["prompt"] for line in lines)


class TestSelftest:
    def test_tagged(self, capsys):
        assert run("--nocolor", "selftest", "--tag", "scene_graph") == 0

        assert "check(s): OK" in capsys.readouterr().out

    @pytest.mark.slow
    def test_all(self, capsys):
        assert run("--nocolor", "selftest") == 0

        assert "check(s): OK" in capsys.readouterr().out


class TestDeterminism:
    def test_render_and_eval(self, tmp_path, manifest, predictions):
        for name in ("a", "b"):
            run("render", manifest, "--out", tmp_path / f"renders-{name}")
            run("eval", manifest, predictions, "--format", "json", "--out", tmp_path / f"report-{name}.json")

        assert (tmp_path / "report-a.json").read_bytes() == (tmp_path / "report-b.json").read_bytes()
        for svg in (tmp_path / "renders-a").iterdir():
            assert svg.read_bytes() == (tmp_path / "renders-b" / svg.name).read_bytes()

    def test_solve(self, tmp_path, manifest, predictions):
        again = tmp_path / "again.jsonl"

        run("solve", manifest, "--out", again, "--parallelism", 2)

        assert again.read_bytes() == predictions.read_bytes()


@pytest.mark.slow
@pytest.mark.parametrize(
    "task, count, seed, sizes",
    (
        ("sorting", 1000, 42, ()),
        ("alignment", 500, 7, ("--rows", "3:5", "--cols", "3:6", "--perturb", "0.2:0.4")),
        ("roomedit", 500, 11, ("--refs", "2:3")),
    ),
)
def test_oracle_closure(tmp_path, task, count, seed, sizes):
    manifest, predictions = tmp_path / "manifest.jsonl", tmp_path / "predictions.jsonl"
    report = tmp_path / "report.json"

    assert run("gen", "--task", task, "--count", count, "--seed", seed, *sizes, "--out", manifest) == 0
    assert run("solve", manifest, "--out", predictions, "--parallelism", 4) == 0
    assert run("eval", manifest, predictions, "--format", "json", "--out", report) == 0

    headline = json.loads(report.read_text())["tasks"][task]["headline"]
    assert headline["Mean IoU"] >= 0.999
    assert headline["Ctr. Dist."] <= 1e-6
    if task == "sorting":
        assert headline["Col. Free"] == 1.0
        assert headline["Edit Dist."] == 0.0
    if task == "alignment":
        assert headline["IoU@0.5"] == 1.0
    if task == "roomedit":
        assert all(record.residual < 1e-3 for record in read_predictions(predictions))

import json

import pytest
from layoutbench.benchgen import dataset, generate
from layoutbench.exceptions import DatasetError


@pytest.fixture(scope="module")
def instances():
    return generate("sorting", 3, 21)


class TestWriteDataset:
    def test_sorted_by_id(self, tmp_path, instances):
        path = tmp_path / "data.jsonl"

        count = dataset.write_dataset(reversed(instances), path)

        assert count == 3
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines == [instance.to_json() for instance in instances]

    def test_byte_identical(self, tmp_path, instances):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"

        dataset.write_dataset(instances, first)
        dataset.write_dataset(generate("sorting", 3, 21), second)

        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes().endswith(b"\n")

    def test_unwritable(self, tmp_path, instances):
        with pytest.raises(DatasetError):
            dataset.write_dataset(instances, tmp_path / "missing" / "data.jsonl")


class TestReadDataset:
    def test_round_trip(self, tmp_path, instances):
        path = tmp_path / "data.jsonl"
        dataset.write_dataset(instances, path)

        actual = dataset.read_dataset(path)

        assert actual == instances

    def test_blank_lines_skipped(self, tmp_path, instances):
        path = tmp_path / "data.jsonl"
        path.write_text(f"\n{instances[0].to_json()}\n\n", encoding="utf-8")

        assert dataset.read_dataset(path) == instances[:1]

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="missing.jsonl"):
            dataset.read_dataset(tmp_path / "missing.jsonl")

    def test_invalid_json(self, tmp_path, instances):
        path = tmp_path / "data.jsonl"
        path.write_text(instances[0].to_json() + "\n{oops\n", encoding="utf-8")

        with pytest.raises(DatasetError, match=r"data.jsonl:2: invalid JSON") as info:
            dataset.read_dataset(path)

        assert info.value.line == 2

    def test_invalid_record(self, tmp_path, instances):
        record = json.loads(instances[0].to_json())
        del record["instruction"]
        path = tmp_path / "data.jsonl"
        path.write_text(json.dumps(record) + "\n", encoding="utf-8")

        with pytest.raises(DatasetError, match="data.jsonl:1: record is missing field 'instruction'"):
            dataset.read_dataset(path)

    def test_duplicate_id(self, tmp_path, instances):
        path = tmp_path / "data.jsonl"
        dataset.write_lines(path, [instances[0].to_json()] * 2)

        with pytest.raises(DatasetError, match="duplicate instance id"):
            dataset.read_dataset(path)

    def test_not_utf8(self, tmp_path):
        path = tmp_path / "data.jsonl"
        path.write_bytes(b'{"id": "\xff"}\n')

        with pytest.raises(DatasetError, match="not UTF-8"):
            dataset.read_dataset(path)


def test_iter_jsonl(tmp_path):
    path = tmp_path / "values.jsonl"
    dataset.write_lines(path, ["1", "", '{"a": 2}'])

    assert list(dataset.iter_jsonl(path)) == [(1, 1), (3, {"a": 2})]

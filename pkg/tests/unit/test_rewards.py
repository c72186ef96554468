import numpy as np
import pytest
from layoutbench import rewards
from layoutbench.rewards import Defect, FormatRubric
from layoutbench.scene_graph import Node, NodeType, SceneGraph, Vec3, serialize_scene_graph
from layoutbench.solvers.base import Pose, SolveStep


def cube(node_id: int, x: float, caption: str | None = None) -> Node:
    return Node(node_id, NodeType.OBJECT, Vec3(x, 0.0, 0.8), Vec3(0.1, 0.1, 0.1), caption=caption)


@pytest.fixture
def graph() -> SceneGraph:
    return SceneGraph.of(
        [
            Node(0, NodeType.CONTAINER, Vec3(0, 0, 0.375), Vec3(1.2, 0.8, 0.75), caption="table"),
            cube(1, -0.25, "red cube"),
            cube(2, 0.25, "blue cube"),
        ]
    )


def fence(body: str) -> str:
    return f"```json\n{body}\n```\n"


ANSWER = '{"1":{"node_type":"object","center_location":[0,0,0.05],"dimension":[0.1,0.1,0.1],"rotation":[0,0,0]}}'


class TestParseTrace:
    def test_canonical_trace(self, graph):
        text = rewards.canonical_trace(graph)

        actual = rewards.parse_trace(text)

        assert actual.defects == ()
        assert actual.tags_present
        assert len(actual.think_json_blocks) == 1
        assert actual.answer_graph == graph

    def test_crlf_line_endings(self, graph):
        text = rewards.canonical_trace(graph).replace("\n", "\r\n")

        actual = rewards.parse_trace(text)

        assert actual.defects == ()
        assert len(actual.think_json_blocks) == 1
        assert actual.answer_graph == graph

    def test_bytes_input(self, graph):
        actual = rewards.parse_trace(rewards.canonical_trace(graph).encode("utf-8"))

        assert actual.answer_graph == graph

    @pytest.mark.parametrize(
        "text, expected",
        (
            (
                "",
                (Defect.MISSING_OPEN_TAG, Defect.MISSING_CLOSE_TAG, Defect.NO_THINK_JSON, Defect.NO_ANSWER_JSON),
            ),
            (
                fence(ANSWER),
                (Defect.MISSING_OPEN_TAG, Defect.MISSING_CLOSE_TAG, Defect.NO_THINK_JSON),
            ),
            (
                "<think>\nmoving things\n</think>\n" + fence(ANSWER),
                (Defect.NO_THINK_JSON,),
            ),
            (
                "<think>\n" + fence("{not json") + "</think>\n" + fence(ANSWER),
                (Defect.INVALID_THINK_JSON,),
            ),
            (
                "<think>\n" + fence("{}") + "</think>\n" + fence("{broken"),
                (Defect.INVALID_ANSWER_JSON,),
            ),
            (
                "<think>\n" + fence("{}") + "</think>\n" + fence("[1, 2]"),
                (Defect.INVALID_ANSWER_GRAPH,),
            ),
            (
                "<think>\n" + fence("{}") + "</think>\n" + fence(ANSWER) + "Hope this helps!",
                (Defect.EXTRA_TEXT_AFTER_ANSWER,),
            ),
            (
                "<think>\n" + fence("{}") + "</think>\n<think>\n</think>\n" + fence(ANSWER),
                (Defect.MISNESTED_TAGS,),
            ),
            (
                "</think>\n" + fence(ANSWER) + "<think>",
                (Defect.MISNESTED_TAGS, Defect.NO_THINK_JSON, Defect.EXTRA_TEXT_AFTER_ANSWER),
            ),
            (
                "<think>\n" + fence("{}") + fence(ANSWER),
                (Defect.MISSING_CLOSE_TAG, Defect.NO_THINK_JSON),
            ),
        ),
    )
    def test_defects(self, text, expected):
        actual = rewards.parse_trace(text)

        assert actual.defects == expected

    def test_inline_fence_not_recognised(self):
        actual = rewards.parse_trace("<think>\nsee ```json\n{}\n```\n</think>\n" + fence(ANSWER))

        assert actual.has(Defect.NO_THINK_JSON)

    def test_last_answer_block_wins(self):
        other = ANSWER.replace('"1"', '"7"')

        actual = rewards.parse_trace("<think>\n" + fence("{}") + "</think>\n" + fence(ANSWER) + fence(other))

        assert actual.answer_graph.ids == [7]

    def test_block_span_is_byte_range(self):
        text = "<think>\nDéplacer le cube ➜ gauche\n" + fence('{"a": 1}') + "</think>\n" + fence(ANSWER)

        actual = rewards.parse_trace(text)

        encoded = text.encode("utf-8")
        (block,) = actual.think_json_blocks
        start, end = block.span
        assert encoded[start:end].decode("utf-8") == block.text
        start, end = actual.answer_block.span
        assert encoded[start:end].decode("utf-8") == actual.answer_block.text

    def test_invalid_utf8_does_not_raise(self):
        actual = rewards.parse_trace(b"\xff\xfe<think>")

        assert actual.has(Defect.MISSING_CLOSE_TAG)


FRAGMENTS = (
    b"<think>",
    b"</think>",
    b"```json\n",
    b"```\n",
    b"\r\n",
    b"{",
    b"}",
    b"[",
    b'"1":',
    b"\xff",
    b"Final Scene Graph\n",
)


def fuzz_cases(seed: int, count: int):
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(count):
        parts = []
        for _ in range(int(rng.integers(0, 12))):
            if rng.random() < 0.5:
                parts.append(FRAGMENTS[int(rng.integers(len(FRAGMENTS)))])
            else:
                parts.append(rng.bytes(int(rng.integers(0, 24))))
        yield b"".join(parts)


class TestParseTraceFuzz:
    def run(self, count: int):
        for case in fuzz_cases(99, count):
            document = rewards.parse_trace(case)

            assert 0.0 <= rewards.format_score(document) <= 1.0

    def test_random_bytes(self):
        self.run(2_000)

    @pytest.mark.slow
    def test_random_bytes_full(self):
        self.run(100_000)


class TestFormatRubric:
    def test_defaults(self):
        target = FormatRubric()

        assert (target.tags, target.think_json, target.answer_json) == (0.4, 0.3, 0.3)

    def test_from_mapping(self):
        target = FormatRubric.from_mapping({"tags": 0.5, "answer_json": "0.2"})

        assert target.tags == 0.5
        assert target.answer_json == 0.2
        assert target.think_json == 0.3

    @pytest.mark.parametrize("values", (None, {}))
    def test_from_mapping__empty(self, values):
        assert FormatRubric.from_mapping(values) == FormatRubric()

    def test_from_mapping__unknown_key(self):
        with pytest.raises(ValueError, match="unknown rubric keys: bonus"):
            FormatRubric.from_mapping({"bonus": 1.0})


class TestFormatScore:
    @pytest.mark.parametrize(
        "text, expected",
        (
            ("", 0.0),
            ("just some words", 0.0),
            (fence(ANSWER), 0.3),
            (fence(ANSWER) + "trailing", 0.2),
            ("<think>\nreasoning\n</think>\n" + fence(ANSWER), 0.7),
            ("<think>\n" + fence("{bad") + "</think>\n" + fence(ANSWER), 0.8),
            ("<think>\n" + fence("{}") + "</think>\n" + fence("{bad"), 0.8),
            ("<think>\n" + fence("{}") + "</think>\n" + fence(ANSWER), 1.0),
            ("<think>\n" + fence("{}") + "</think>\n</think>\n" + fence(ANSWER), 0.8),
            ("<think>\n" + fence("{}") + "</think>\n" + fence("[1]") + "more", 0.9),
        ),
    )
    def test_scores(self, text, expected):
        actual = rewards.format_score(rewards.parse_trace(text))

        assert actual == pytest.approx(expected)

    def test_custom_rubric(self):
        rubric = FormatRubric(tags=0.5, think_json=0.25, answer_json=0.25)
        doc = rewards.parse_trace("<think>\n" + fence("{}") + "</think>\n" + fence(ANSWER))

        assert rewards.format_score(doc, rubric) == 1.0

    def test_clamped(self):
        rubric = FormatRubric(tags=0.6, think_json=0.6, answer_json=0.6)
        doc = rewards.parse_trace("<think>\n" + fence("{}") + "</think>\n" + fence(ANSWER))

        assert rewards.format_score(doc, rubric) == 1.0


class TestCompositeReward:
    def test_canonical_answer(self, graph):
        actual = rewards.composite_reward(rewards.canonical_trace(graph), graph)

        assert actual.iou == 1.0
        assert actual.coll == 1.0
        assert actual.fmt == 1.0
        assert actual.composite == pytest.approx(1.4)
        assert actual.defects == ()

    @pytest.mark.parametrize("text", ("", "I cannot do that", b"\x00\xff"))
    def test_garbage(self, graph, text):
        actual = rewards.composite_reward(text, graph)

        assert actual.composite == 0.0
        assert actual.matching.unmatched_gt == (0, 1, 2)

    def test_weights(self, graph):
        colliding = graph.with_node(cube(2, -0.22, "blue cube"))
        text = fence(serialize_scene_graph(colliding))

        actual = rewards.composite_reward(text, graph, lambda1=0.5, lambda2=1.0)

        assert actual.coll == 0.5
        assert actual.fmt == 0.3
        assert actual.composite == pytest.approx(actual.iou + 0.5 * 0.5 + 1.0 * 0.3)
        assert actual.as_dict()["defects"] == ["missing_open_tag", "missing_close_tag", "no_think_json"]

    def test_as_dict(self, graph):
        actual = rewards.composite_reward(rewards.canonical_trace(graph), graph).as_dict()

        assert actual["matched"] == 3
        assert actual["lambda1"] == 0.2
        assert list(actual) == ["composite", "iou", "coll", "fmt", "lambda1", "lambda2", "defects", "matched"]


class TestRenderTrace:
    def test_steps(self, graph):
        first = graph[1].moved(Vec3(-0.4, 0, 0.8))
        second = graph[2].moved(Vec3(0.4, 0, 0.8))
        final = graph.with_node(first).with_node(second)
        steps = [
            SolveStep(first, Pose.of(graph[1]), "Move the red cube to the left end."),
            SolveStep(second, Pose.of(graph[2]), "Move the blue cube to the right end."),
        ]

        actual = rewards.render_trace(steps, final)

        assert actual.startswith("<think>\nStep 1: Move the red cube to the left end.\n```json\n{\"1\":")
        assert "Step 2: Move the blue cube to the right end.\n" in actual
        assert "</think>\nFinal Scene Graph\n```json\n" in actual
        doc = rewards.parse_trace(actual)
        assert doc.defects == ()
        assert [block.value for block in doc.think_json_blocks][0].keys() == {"1"}
        assert doc.answer_graph == final

    def test_deterministic(self, graph):
        assert rewards.canonical_trace(graph) == rewards.canonical_trace(graph)

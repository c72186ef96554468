from layoutbench.benchgen import render_prompt
from layoutbench.rewards import ANSWER_HEADING, CLOSE_TAG, OPEN_TAG
from layoutbench.scene_graph import serialize_scene_graph


def test_render_prompt(instance):
    actual = render_prompt(instance)

    assert f"Question: {instance.instruction}" in actual
    assert serialize_scene_graph(instance.initial_graph) in actual
    assert OPEN_TAG in actual and CLOSE_TAG in actual and ANSWER_HEADING in actual
    assert actual.endswith("\n")


def test_render_prompt__target_hidden(alignment_instance):
    actual = render_prompt(alignment_instance)

    assert serialize_scene_graph(alignment_instance.target_graph) not in actual
    assert f"{alignment_instance.spec.rows} x {alignment_instance.spec.cols} grid" in actual


def test_render_prompt__distances(roomedit_instance):
    spec = roomedit_instance.spec

    actual = render_prompt(roomedit_instance)

    assert f"The new node gets id {spec.new_node.id}." in actual
    for ref in spec.references:
        assert f"(id {ref.node_id})" in actual


def test_render_prompt__deterministic(sorting_instance):
    assert render_prompt(sorting_instance) == render_prompt(sorting_instance)

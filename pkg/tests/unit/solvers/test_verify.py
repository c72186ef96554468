from dataclasses import replace

import pytest
from layoutbench.scene_graph import Vec3
from layoutbench.solvers import verify
from layoutbench.solvers.verify import ConstraintCheck, VerifyReport

SORTING_CHECKS = ["nodes", "collision_free", "order", "gaps", "span", "span_start", "center_line", "support"]


class TestVerifyReport:
    @pytest.fixture
    def target(self):
        return VerifyReport(
            "x",
            (ConstraintCheck("nodes", True, [1], [1]), ConstraintCheck("gaps", False, 0.2, 0.0, 1e-6)),
        )

    def test_passed(self, target):
        assert not target.passed
        assert [check.name for check in target.failures] == ["gaps"]

    def test_getitem(self, target):
        assert target["gaps"].measured == 0.2

        with pytest.raises(KeyError):
            target["span"]

    def test_as_dict(self, target):
        actual = target.as_dict()

        assert actual["id"] == "x"
        assert actual["passed"] is False
        assert actual["checks"][1] == {
            "name": "gaps",
            "passed": False,
            "measured": 0.2,
            "expected": 0.0,
            "tolerance": 1e-6,
        }


def test_target_passes(instance):
    actual = verify(instance, instance.target_graph)

    assert actual.passed, actual.failures
    assert actual.instance_id == instance.id


class TestSorting:
    def test_checks(self, sorting_instance):
        actual = verify(sorting_instance, sorting_instance.target_graph)

        assert [check.name for check in actual.checks] == SORTING_CHECKS

    def test_initial_scatter_fails(self, sorting_instance):
        actual = verify(sorting_instance, sorting_instance.initial_graph)

        assert not actual["support"].passed or not actual["center_line"].passed
        assert not actual["gaps"].passed

    def test_swapped_neighbours(self, sorting_instance):
        target = sorting_instance.target_graph
        first, second = verify(sorting_instance, target)["order"].expected[:2]
        a, b = target[first], target[second]
        swapped = target.with_node(a.moved(b.center_location)).with_node(b.moved(a.center_location))

        actual = verify(sorting_instance, swapped)

        assert actual["order"].measured[:2] == [second, first]
        assert not actual.passed

    def test_unknown_label(self, sorting_instance):
        target = sorting_instance.target_graph
        node = target.objects()[0]
        renamed = target.with_node(replace(node, caption="neon blob thing"))

        actual = verify(sorting_instance, renamed)

        assert actual["groups"].passed is False


class TestAlignment:
    def test_initial_fails_lattice(self, alignment_instance):
        actual = verify(alignment_instance, alignment_instance.initial_graph)

        assert not actual["lattice"].passed or not actual["rotation"].passed
        assert actual["anchors_unchanged"].passed

    def test_moved_anchor(self, alignment_instance):
        target = alignment_instance.target_graph
        anchor_id = next(
            node_id
            for node_id in alignment_instance.spec.cell_assignment.values()
            if node_id not in alignment_instance.spec.perturbed_ids
        )
        node = target[anchor_id]
        nudged = target.with_node(node.moved(node.center_location + Vec3(0.0, 0.0, 0.01)))

        actual = verify(alignment_instance, nudged)

        assert actual["anchors_unchanged"].measured == [anchor_id]
        assert not actual["lattice"].passed


class TestPlacement:
    def test_missing_insert(self, roomedit_instance):
        actual = verify(roomedit_instance, roomedit_instance.initial_graph)

        assert actual["inserted"].passed is False
        assert actual["nodes"].passed is False
        assert [check.name for check in actual.checks] == ["nodes", "collision_free", "inserted"]

    def test_distance_off(self, roomedit_instance):
        spec = roomedit_instance.spec
        node = roomedit_instance.target_graph[spec.new_node.id]
        ref = spec.references[0]
        # Straight up, far beyond the tolerance
        lifted = node.moved(node.center_location + Vec3(0.0, 0.0, 3.0))

        actual = verify(roomedit_instance, roomedit_instance.target_graph.with_node(lifted))

        assert actual[f"distance[{ref.node_id}]"].passed is False
        assert actual["support"].passed is False

    def test_existing_removed(self, roomedit_instance):
        target = roomedit_instance.target_graph
        ref = roomedit_instance.spec.references[0]

        actual = verify(roomedit_instance, target.without(ref.node_id))

        assert actual["existing_unchanged"].measured == [ref.node_id]
        assert actual[f"distance[{ref.node_id}]"].measured is None

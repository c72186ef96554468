import pytest
from layoutbench.benchgen.seeding import derive_seed
from layoutbench.benchgen.sorting import TABLE_ID, SortingParams, gen_sorting
from layoutbench.exceptions import GenerationError
from layoutbench.metrics import colliding_pairs
from layoutbench.scene_graph import Axis, world_aabb
from layoutbench.solvers import verify
from layoutbench.tasks import GroupKey, SortKey, SortOrder, TaskKind, group_label


class TestGenSorting:
    @pytest.fixture(scope="class")
    def target(self):
        return gen_sorting(7, 6, index=3)

    def test_deterministic(self, target):
        assert gen_sorting(7, 6, index=3).to_json() == target.to_json()

    def test_index_changes_instance(self, target):
        assert gen_sorting(7, 6, index=4).to_json() != target.to_json()

    def test_identity(self, target):
        assert target.id == "sorting-7-000003"
        assert target.task is TaskKind.SORTING
        assert target.seed == derive_seed(7, 3)

    def test_same_objects_in_both_graphs(self, target):
        assert target.initial_graph.ids == target.target_graph.ids == list(range(7))
        for node in target.initial_graph.objects():
            other = target.target_graph[node.id]
            assert (node.dimension, node.caption) == (other.dimension, other.caption)
        assert target.initial_graph[TABLE_ID] == target.target_graph[TABLE_ID]

    def test_every_group_has_members(self, target):
        spec = target.spec

        labels = {group_label(node, spec.group_key) for node in target.target_graph.objects()}

        assert labels == set(spec.group_order)

    def test_target_satisfies_constraints(self, target):
        report = verify(target, target.target_graph)

        assert report.passed, report.failures

    def test_scatter_on_table_and_collision_free(self, target):
        table = world_aabb(target.initial_graph[TABLE_ID])

        for node in target.initial_graph.objects():
            box = world_aabb(node)
            assert box.min.z == pytest.approx(table.max.z)
            assert table.min.x <= box.min.x and box.max.x <= table.max.x
            assert table.min.y <= box.min.y and box.max.y <= table.max.y
        assert colliding_pairs(target.initial_graph) == []

    def test_instruction_names_constraints(self, target):
        spec = target.spec

        for word in (spec.group_key.value, spec.sort_key.value, spec.sort_order.value, *spec.group_order):
            assert word in target.instruction

    def test_fixed_choices(self):
        params = SortingParams(
            n_groups=3, axis="y", group_key="shape", sort_key="width", sort_order="descending"
        )

        actual = gen_sorting(3, 8, params)

        spec = actual.spec
        assert (spec.axis, spec.group_key, spec.sort_key, spec.sort_order) == (
            Axis.Y,
            GroupKey.SHAPE,
            SortKey.WIDTH,
            SortOrder.DESCENDING,
        )
        assert len(spec.group_order) == 3
        assert actual.target_graph[TABLE_ID].dimension.y == 2.4
        assert verify(actual, actual.target_graph).passed

    def test_span_is_centred(self):
        spec = gen_sorting(5, 5).spec

        assert spec.span_start == pytest.approx(-spec.total_span / 2)

    @pytest.mark.parametrize(
        "n_objects, params, match",
        (
            (1, None, "at least 2 objects"),
            (3, SortingParams(n_groups=4), "groups"),
            (3, SortingParams(n_groups=0), "groups"),
            (10, SortingParams(table_length=0.3), "exceeds the usable table length"),
        ),
    )
    def test_infeasible(self, n_objects, params, match):
        with pytest.raises(GenerationError, match=match):
            gen_sorting(1, n_objects, params)

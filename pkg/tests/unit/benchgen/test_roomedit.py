import pytest
from layoutbench.benchgen import roomedit
from layoutbench.benchgen.roomedit import FLOOR_ID, FLOOR_THICKNESS, RoomeditParams, gen_roomedit
from layoutbench.exceptions import GenerationError
from layoutbench.scene_graph import Node, NodeType, Vec3
from layoutbench.solvers import verify
from layoutbench.tasks import Reference


def post(node_id: int, x: float, y: float) -> Node:
    return Node(node_id, NodeType.OBJECT, Vec3(x, y, 0.5), Vec3(0.2, 0.2, 1.0))


class TestNearestReferences:
    @pytest.fixture
    def nodes(self):
        return [post(3, 3, 0), post(1, 1, 0), post(2, 0, 2), post(4, -2, 0)]

    def test_ranked_by_distance(self, nodes):
        actual = roomedit.nearest_references(nodes, Vec3(0, 0, 0.5), 3)

        assert actual == (Reference(1, 1.0), Reference(2, 2.0), Reference(4, 2.0))

    def test_rounded_to_centimetres(self, nodes):
        (actual,) = roomedit.nearest_references(nodes, Vec3(0.123, 0, 0.5), 1)

        assert actual == Reference(1, 0.88)


class TestGenRoomedit:
    @pytest.fixture(scope="class")
    def target(self):
        return gen_roomedit(5, 4, 3)

    def test_deterministic(self, target):
        assert gen_roomedit(5, 4, 3).to_json() == target.to_json()

    def test_inserts_one_node(self, target):
        spec = target.spec

        assert spec.new_node.id == 5
        assert spec.new_node.id not in target.initial_graph
        assert target.target_graph.ids == [*target.initial_graph.ids, 5]

    def test_existing_untouched(self, target):
        for node in target.initial_graph:
            assert target.target_graph[node.id] == node

    def test_floor(self, target):
        floor = target.initial_graph[FLOOR_ID]

        assert floor.is_container
        assert floor.aabb.max.z == pytest.approx(0.0)
        assert floor.dimension.z == FLOOR_THICKNESS

    def test_references(self, target):
        spec = target.spec
        placed = target.target_graph[spec.new_node.id]

        assert len(spec.references) == 3
        assert FLOOR_ID not in {ref.node_id for ref in spec.references}
        for ref in spec.references:
            assert ref.distance == round(ref.distance, 2)
            measured = (placed.center_location - target.initial_graph[ref.node_id].center_location).norm()
            assert measured == pytest.approx(ref.distance, abs=0.01)

    def test_new_node_on_floor(self, target):
        placed = target.target_graph[target.spec.new_node.id]

        assert placed.aabb.min.z == pytest.approx(0.0)
        assert target.spec.room_bounds.contains(placed.aabb)

    def test_target_satisfies_constraints(self, target):
        report = verify(target, target.target_graph)

        assert report.passed, report.failures

    def test_instruction_names_references(self, target):
        assert target.spec.new_node.caption in target.instruction
        for ref in target.spec.references:
            assert target.initial_graph[ref.node_id].caption in target.instruction

    @pytest.mark.parametrize(
        "n_existing, n_refs, match",
        (
            (4, 1, "2 or 3 references"),
            (4, 4, "2 or 3 references"),
            (2, 3, "existing objects"),
            (12, 2, "existing objects"),
        ),
    )
    def test_invalid(self, n_existing, n_refs, match):
        with pytest.raises(GenerationError, match=match):
            gen_roomedit(1, n_existing, n_refs)

    def test_no_room(self):
        params = RoomeditParams(room_length=0.5, room_width=0.5, max_attempts=2)

        with pytest.raises(GenerationError, match="no unambiguous placement"):
            gen_roomedit(1, 2, 2, params)

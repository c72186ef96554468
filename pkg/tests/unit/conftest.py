import pytest
from layoutbench.benchgen import generate_one
from layoutbench.tasks import TaskInstance, TaskKind

SEED = 1234


@pytest.fixture(scope="session")
def sorting_instance() -> TaskInstance:
    return generate_one(TaskKind.SORTING, SEED, 0)


@pytest.fixture(scope="session")
def alignment_instance() -> TaskInstance:
    return generate_one(TaskKind.ALIGNMENT, SEED, 0)


@pytest.fixture(scope="session")
def roomedit_instance() -> TaskInstance:
    return generate_one(TaskKind.ROOMEDIT, SEED, 0)


@pytest.fixture(params=list(TaskKind), ids=lambda kind: kind.value, scope="session")
def instance(request) -> TaskInstance:
    return generate_one(request.param, SEED, 1)

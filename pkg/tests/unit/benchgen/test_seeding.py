import numpy as np
import pytest
from layoutbench.benchgen import seeding


class TestDeriveSeed:
    def test_stable(self):
        assert seeding.derive_seed(7, 3) == seeding.derive_seed(7, 3)

    def test_unsigned_64_bit(self):
        actual = seeding.derive_seed(2**63, 10)

        assert 0 <= actual < 2**64

    @pytest.mark.parametrize("other", ((8, 3, 0), (7, 4, 0), (7, 3, 1)))
    def test_distinct(self, other):
        assert seeding.derive_seed(*other) != seeding.derive_seed(7, 3)

    def test_attempt_zero_is_instance_stream(self):
        assert seeding.derive_seed(7, 3, 0) == seeding.derive_seed(7, 3)


def test_instance_rng():
    rng, seed = seeding.instance_rng(1, 2)

    assert seed == seeding.derive_seed(1, 2)
    assert rng.integers(1 << 30) == np.random.Generator(np.random.PCG64(seed)).integers(1 << 30)


def test_parameter_rng__independent_stream():
    rng, _ = seeding.instance_rng(1, 2)

    assert seeding.parameter_rng(1, 2).random(4).tolist() != rng.random(4).tolist()
    assert seeding.parameter_rng(1, 2).random(4).tolist() == seeding.parameter_rng(1, 2).random(4).tolist()


@pytest.mark.parametrize(
    "args, expected",
    ((("sorting", 42, 0), "sorting-42-000000"), (("roomedit", 1, 1234567), "roomedit-1-1234567")),
)
def test_instance_id(args, expected):
    assert seeding.instance_id(*args) == expected

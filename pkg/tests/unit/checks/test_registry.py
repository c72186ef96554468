import pytest
from layoutbench.checks import registry
from layoutbench.checks.messages import Error, Info, UnhandledException, Warn


@pytest.fixture
def target() -> registry.CheckRegistry:
    return registry.CheckRegistry()


class TestCheckRegistry:
    def test_register__plain(self, target):
        @target.register
        def check_a(**_):
            pass

        assert check_a in target
        assert check_a._check__tags == ()

    def test_register__with_tags(self, target):
        @target.register("metrics", "closure")
        def check_b(**_):
            pass

        assert check_b in target
        assert set(check_b._check__tags) == {"metrics", "closure"}

    def test_register__only_once(self, target):
        def check_c(**_):
            pass

        target.register(check_c)
        target.register(check_c)

        assert len(target) == 1

    def test_checks_by_tags(self, target):
        @target.register("metrics")
        def check_metrics(**_):
            pass

        @target.register("grpo")
        def check_grpo(**_):
            pass

        @target.register
        def check_untagged(**_):
            pass

        assert list(target.checks_by_tags(["grpo"])) == [check_grpo]
        assert list(target.checks_by_tags()) == [check_metrics, check_grpo, check_untagged]

    def test_run_checks_iter(self, target):
        @target.register
        def check_none(settings, **_):
            assert settings.SEED is not None

        @target.register
        def check_single(**_):
            return Warn("single")

        @target.register
        def check_many(**_):
            return [Info("one"), Error("two")]

        @target.register
        def check_raises(**_):
            raise RuntimeError("boom")

        seen = []

        actual = list(target.run_checks_iter(pre_callback=seen.append))

        assert seen == [check_none, check_single, check_many, check_raises]
        assert [result.messages for result in actual[:3]] == [(), (Warn("single"),), (Info("one"), Error("two"))]
        (message,) = actual[3].messages
        assert isinstance(message, UnhandledException)
        assert message.obj == "check_raises"
        assert "RuntimeError: boom" in message.hint

    def test_run_checks(self, target):
        @target.register("metrics")
        def check_a(**_):
            return Error("a")

        @target.register("grpo")
        def check_b(**_):
            return [Warn("b"), Info("c")]

        assert target.run_checks() == (Error("a"), Warn("b"), Info("c"))
        assert target.run_checks(["grpo"]) == (Warn("b"), Info("c"))


def test_built_in_checks_are_registered():
    registry.import_checks()

    names = {check.__name__ for check in registry.registry}

    assert {
        "iou_oracle",
        "iou_symmetry",
        "collision_cases",
        "levenshtein_exhaustive",
        "grpo_identities",
        "format_rubric",
        "round_trip",
        "oracle_closure",
    } <= names

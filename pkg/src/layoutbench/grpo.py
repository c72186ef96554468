"""
GRPO
~~~~

Group relative policy optimisation objective, evaluated (not differentiated).

For a group of ``G`` rollouts of the same query::

    A_i   = (r_i - mean(r)) / std(r)                  population std
    ratio = exp(logp_new - logp_old)                  per token
    kl    = u - log(u) - 1,  u = exp(logp_ref - logp_new)
    term  = min(ratio * A_i, clip(ratio, 1 - eps, 1 + eps) * A_i) - beta * kl
    J     = mean_i( mean_t(term) )

"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidRollout

__all__ = (
    "GrpoConfig",
    "GrpoResult",
    "RolloutGroup",
    "group_advantages",
    "grpo_objective",
    "kl_penalty",
    "token_ratio",
)

KL_ESTIMATOR = "u - log(u) - 1, u = pi_ref / pi_theta (per token)"
AGGREGATION = "token mean per sample, then mean over samples"

# Log-ratios are clamped to this magnitude before exponentiation
MAX_LOG_RATIO = 50.0


def _array(values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64)


@dataclass(frozen=True)
class GrpoConfig:
    clip_eps: float = 0.2
    kl_beta: float = 0.01
    std_floor: float = 1e-8

    def __post_init__(self):
        if self.clip_eps <= 0:
            raise InvalidRollout("clip_eps must be positive")
        if self.kl_beta < 0:
            raise InvalidRollout("kl_beta must not be negative")
        if self.std_floor <= 0:
            raise InvalidRollout("std_floor must be positive")


@dataclass(frozen=True)
class RolloutGroup:
    """Rewards and per token log-probabilities of ``G`` rollouts."""

    rewards: Sequence[float]
    logp_new: Sequence[Sequence[float]]
    logp_old: Sequence[Sequence[float]]
    logp_ref: Sequence[Sequence[float]]

    def __post_init__(self):
        rewards = _array(self.rewards)
        if rewards.ndim != 1 or rewards.size < 1:
            raise InvalidRollout("a group needs at least one reward")
        if not np.all(np.isfinite(rewards)):
            raise InvalidRollout("rewards must be finite")

        arrays = []
        for name in ("logp_new", "logp_old", "logp_ref"):
            samples = tuple(_array(sample) for sample in getattr(self, name))
            if len(samples) != rewards.size:
                raise InvalidRollout(f"{name} has {len(samples)} samples, expected {rewards.size}")
            for sample in samples:
                if sample.ndim != 1 or sample.size < 1:
                    raise InvalidRollout(f"{name}: every sample needs at least one token")
                if not np.all(np.isfinite(sample)):
                    raise InvalidRollout(f"{name}: log-probabilities must be finite")
            arrays.append(samples)
            object.__setattr__(self, name, samples)

        for index, lengths in enumerate(zip(*(map(len, a) for a in arrays))):
            if len(set(lengths)) != 1:
                raise InvalidRollout(f"sample {index}: log-probability lengths differ")
        object.__setattr__(self, "rewards", rewards)

    @property
    def size(self) -> int:
        return len(self.rewards)

    @property
    def lengths(self) -> list[int]:
        return [len(sample) for sample in self.logp_new]


def group_advantages(rewards: Sequence[float], std_floor: float = 1e-8) -> np.ndarray:
    """Group normalised advantages; all zero when the std is below ``std_floor``."""
    rewards = _array(rewards)
    std = float(np.std(rewards))
    if rewards.size < 2 or std < std_floor:  # noqa: PLR2004
        return np.zeros_like(rewards)
    return (rewards - rewards.mean()) / std


def token_ratio(logp_new, logp_old) -> np.ndarray:
    log_ratio = _array(logp_new) - _array(logp_old)
    return np.exp(np.clip(log_ratio, -MAX_LOG_RATIO, MAX_LOG_RATIO))


def kl_penalty(logp_new, logp_ref) -> np.ndarray:
    """Per token ``u - log(u) - 1`` with ``u = exp(logp_ref - logp_new)``.

    ``log(u)`` is clamped to +-``MAX_LOG_RATIO`` so the penalty stays finite.
    """
    log_u = np.clip(_array(logp_ref) - _array(logp_new), -MAX_LOG_RATIO, MAX_LOG_RATIO)
    return np.maximum(np.expm1(log_u) - log_u, 0.0)


@dataclass(frozen=True)
class GrpoResult:
    objective: float
    sample_objectives: np.ndarray
    token_terms: tuple[np.ndarray, ...]
    advantages: np.ndarray
    clip_fraction: float
    mean_kl: float
    kl_estimator: str = KL_ESTIMATOR
    aggregation: str = AGGREGATION


def grpo_objective(group: RolloutGroup, cfg: GrpoConfig | None = None) -> GrpoResult:
    """Evaluate the clipped surrogate objective with KL penalty."""
    cfg = cfg or GrpoConfig()
    advantages = group_advantages(group.rewards, cfg.std_floor)

    terms = []
    sample_means = []
    sample_kl = []
    clipped_tokens = 0
    for advantage, new, old, ref in zip(
        advantages, group.logp_new, group.logp_old, group.logp_ref
    ):
        ratio = token_ratio(new, old)
        if advantage == 0.0:
            unclipped = clipped = np.zeros_like(ratio)
        else:
            unclipped = ratio * advantage
            clipped = np.clip(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * advantage
        kl = kl_penalty(new, ref)
        term = np.minimum(unclipped, clipped) - cfg.kl_beta * kl

        clipped_tokens += int(np.count_nonzero(clipped < unclipped))
        terms.append(term)
        sample_means.append(term.mean())
        sample_kl.append(kl.mean())

    sample_objectives = np.array(sample_means)
    return GrpoResult(
        objective=float(sample_objectives.mean()),
        sample_objectives=sample_objectives,
        token_terms=tuple(terms),
        advantages=advantages,
        clip_fraction=clipped_tokens / sum(group.lengths),
        mean_kl=float(np.mean(sample_kl)),
    )

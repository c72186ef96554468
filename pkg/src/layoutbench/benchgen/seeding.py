"""
Seeding
~~~~~~~

Every instance owns a PCG64 stream derived from ``SeedSequence([seed, index])``
(``[seed, index, attempt]`` when parameters are resampled). The derived 64-bit
seed is stored on the instance.

"""

import numpy as np


def derive_seed(seed: int, index: int = 0, attempt: int = 0) -> int:
    entropy = [seed, index] if not attempt else [seed, index, attempt]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def instance_rng(seed: int, index: int = 0, attempt: int = 0) -> tuple[np.random.Generator, int]:
    """Random stream of one instance and its derived seed."""
    derived = derive_seed(seed, index, attempt)
    return np.random.Generator(np.random.PCG64(derived)), derived


def instance_id(task: str, seed: int, index: int) -> str:
    return f"{task}-{seed}-{index:06d}"


def parameter_rng(seed: int, index: int = 0, attempt: int = 0) -> np.random.Generator:
    """Stream for sampling range parameters, independent of the instance stream."""
    sequence = np.random.SeedSequence([seed, index, attempt], spawn_key=(1,))
    return np.random.Generator(np.random.PCG64(sequence))

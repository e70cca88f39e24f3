"""
Named arrangement families used as the test corpus.

- boolean(l): the coordinate hyperplanes of K^l
- braid(l): x_i - x_j for i < j in K^l
- generic(l, n, seed): n forms, every min(l, n) of them independent
- random(l, n, seed): n small integer forms, only zero and proportional forms rejected
"""

import logging
import random
from itertools import combinations
from typing import Sequence

from arrfree.arrangement import Arrangement, LinearForm, build_arrangement
from arrfree.config import get_settings
from arrfree.errors import ArrangementError
from arrfree.polyalg import EchelonForm

logger = logging.getLogger(__name__)

FAMILIES = ("boolean", "braid", "generic", "random")


def boolean_arrangement(dim: int) -> Arrangement:
    forms = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    return build_arrangement(dim, forms, [f"x{i + 1}" for i in range(dim)])


def braid_arrangement(dim: int) -> Arrangement:
    forms = []
    labels = []
    for i, j in combinations(range(dim), 2):
        vector = [0] * dim
        vector[i], vector[j] = 1, -1
        forms.append(vector)
        labels.append(f"x{i + 1}-x{j + 1}")
    return build_arrangement(dim, forms, labels)


def _in_general_position(forms: Sequence[Sequence[int]], dim: int) -> bool:
    size = min(dim, len(forms))
    for subset in combinations(forms, size):
        echelon = EchelonForm(dim)
        for vector in subset:
            if not echelon.add({i: value for i, value in enumerate(vector) if value}):
                return False
    return True


def _pairwise_distinct(forms: Sequence[Sequence[int]]) -> bool:
    if any(not any(vector) for vector in forms):
        return False
    canonical = {LinearForm.canonical(vector) for vector in forms}
    return len(canonical) == len(forms)


def _sample_forms(
    dim: int,
    count: int,
    seed: int,
    coefficient_range: int,
    max_retries: int,
    generic: bool,
) -> list[list[int]]:
    rng = random.Random(seed)
    for attempt in range(max_retries):
        forms = [
            [rng.randint(-coefficient_range, coefficient_range) for _ in range(dim)]
            for _ in range(count)
        ]
        if not _pairwise_distinct(forms):
            continue
        if generic and not _in_general_position(forms, dim):
            continue
        logger.debug(f"Accepted sample after {attempt + 1} draws (seed {seed})")
        return forms
    raise ArrangementError(
        f"No admissible arrangement of {count} forms in dimension {dim} "
        f"after {max_retries} draws with seed {seed}"
    )


def generate_family(
    name: str,
    params: Sequence[int],
    seed: int | None = None,
    *,
    coefficient_range: int | None = None,
    max_retries: int | None = None,
) -> Arrangement:
    settings = get_settings()
    if max_retries is None:
        max_retries = settings.arrfree_family_max_retries

    if name not in FAMILIES:
        raise ArrangementError(f"Unknown family '{name}', expected one of {', '.join(FAMILIES)}")

    expected = 1 if name in ("boolean", "braid") else 2
    if len(params) != expected:
        raise ArrangementError(
            f"Family '{name}' takes {expected} integer parameter(s), got {list(params)}"
        )
    if any(value < 1 for value in params):
        raise ArrangementError(f"Family parameters must be positive, got {list(params)}")

    if name == "boolean":
        return boolean_arrangement(params[0])
    if name == "braid":
        return braid_arrangement(params[0])

    dim, count = params
    seed = 0 if seed is None else seed
    if name == "generic":
        if coefficient_range is None:
            coefficient_range = settings.arrfree_generic_coefficient_range
        forms = _sample_forms(dim, count, seed, coefficient_range, max_retries, generic=True)
    else:
        if coefficient_range is None:
            coefficient_range = settings.arrfree_random_coefficient_range
        forms = _sample_forms(dim, count, seed, coefficient_range, max_retries, generic=False)

    logger.info(f"Generated {name}({dim}, {count}) with seed {seed}")
    return build_arrangement(dim, forms)

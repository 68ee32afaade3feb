import itertools

import pytest

from symbreak.engine import mask_of, propagate_fixpoint, values_of

BINARY_PATTERNS = ((0,), (1,), (0, 1))


def domain_patterns(num_vars, choices=BINARY_PATTERNS):
    return itertools.product(choices, repeat=num_vars)


def pruned(constraint, domains):
    """Propagate one constraint; value sets per variable, or None on failure."""
    out = propagate_fixpoint([mask_of(d) for d in domains], [constraint])
    return None if out is None else [set(values_of(m)) for m in out]


def grid(flat, m):
    return [list(flat[r * m : (r + 1) * m]) for r in range(len(flat) // m)]


@pytest.fixture
def known_still_life_3():
    return [[0, 1, 1], [1, 0, 1], [1, 1, 0]]

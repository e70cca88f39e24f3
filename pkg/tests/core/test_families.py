import pytest

from arrfree.errors import ArrangementError
from arrfree.families import boolean_arrangement, braid_arrangement, generate_family
from arrfree.lattice import char_poly, intersection_lattice


def test_boolean_family():
    arrangement = generate_family("boolean", [3])
    assert arrangement == boolean_arrangement(3)
    assert [form.coefficients for form in arrangement.forms] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert arrangement.labels == ("x1", "x2", "x3")


def test_braid_family_has_one_hyperplane_per_pair():
    arrangement = braid_arrangement(4)
    assert len(arrangement) == 6
    assert arrangement.forms[0].coefficients == (1, -1, 0, 0)
    assert arrangement.labels[-1] == "x3-x4"


def test_generic_family_is_reproducible():
    first = generate_family("generic", [3, 5], seed=11)
    second = generate_family("generic", [3, 5], seed=11)
    assert first == second
    assert len(first) == 5


def test_generic_family_is_in_general_position():
    arrangement = generate_family("generic", [3, 5], seed=2)
    lattice = intersection_lattice(arrangement)
    # every pair meets in a line of its own, every triple only at the origin
    assert sum(flat.dim == 1 for flat in lattice.flats) == 10
    assert sum(flat.dim == 0 for flat in lattice.flats) == 1
    assert str(char_poly(arrangement)) == "t^3 - 5t^2 + 10t - 6"


def test_random_family_uses_the_seed():
    arrangement = generate_family("random", [4, 6], seed=1)
    assert arrangement == generate_family("random", [4, 6], seed=1)
    assert len(arrangement) == 6
    assert arrangement.dim == 4


def test_seed_defaults_to_zero():
    assert generate_family("generic", [3, 4]) == generate_family("generic", [3, 4], seed=0)


@pytest.mark.parametrize(
    "name, params",
    [
        ("simplicial", [3]),
        ("boolean", [3, 4]),
        ("generic", [3]),
        ("braid", [0]),
    ],
)
def test_invalid_family_requests(name, params):
    with pytest.raises(ArrangementError):
        generate_family(name, params)


def test_exhausted_retries():
    # any two nonzero forms on a line are proportional
    with pytest.raises(ArrangementError, match="No admissible arrangement"):
        generate_family("random", [1, 2], seed=0, coefficient_range=1, max_retries=5)

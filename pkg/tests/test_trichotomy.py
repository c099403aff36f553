import pytest

from trichotomy import GeometryProfile, ProfileError, trichotomy_classify


def classify(dim, singular, singular_dim=None, involution=False, context="manifold"):
    profile = GeometryProfile(
        ambient_dim=dim,
        singular=singular,
        singular_dim=singular_dim,
        has_order_two_with_fixed_points=involution,
        context=context,
    )
    return trichotomy_classify(profile)


@pytest.mark.parametrize(
    "dim,singular,singular_dim,involution,case,rigid",
    [
        (2, "empty", None, False, "dim2_regime", True),
        (2, "zero_dim", 0, True, "dim2_regime", True),
        (3, "empty", None, False, "unique_class", True),
        (3, "positive_dim", 1, False, "continuum", False),
        (4, "empty", None, False, "dim4_discrete_unknown", True),
        (4, "zero_dim", 0, True, "dim4_discrete_unknown", True),
        (4, "positive_dim", 2, True, "dim4_positive_continuum", False),
        (5, "positive_dim", 3, False, "continuum", False),
        (6, "zero_dim", 0, True, "countably_many", True),
        (6, "zero_dim", 0, False, "unique_class", True),
        (6, "positive_dim", 2, False, "continuum", False),
        (8, "zero_dim", 0, True, "unique_class", True),
        (10, "zero_dim", 0, True, "countably_many", True),
        (12, "zero_dim", 0, True, "unique_class", True),
        (14, "zero_dim", None, True, "countably_many", True),
        (17, "empty", None, False, "unique_class", True),
        (18, "zero_dim", 0, True, "countably_many", True),
        (20, "positive_dim", None, False, "continuum", False),
        (20, "zero_dim", 0, True, "unique_class", True),
    ],
)
def test_golden_table(dim, singular, singular_dim, involution, case, rigid):
    outcome = classify(dim, singular, singular_dim, involution)
    assert outcome.case == case
    assert outcome.locally_rigid is rigid


@pytest.mark.parametrize("dim", range(3, 21))
def test_empty_singular_set_is_rigid_in_every_dimension(dim):
    outcome = classify(dim, "empty")
    assert outcome.locally_rigid
    assert outcome.case == ("dim4_discrete_unknown" if dim == 4 else "unique_class")


@pytest.mark.parametrize("dim", [d for d in range(5, 21) if d % 2 == 0])
def test_isolated_fixed_points_need_dim_2_mod_4(dim):
    outcome = classify(dim, "zero_dim", 0, True)
    expected = "countably_many" if dim % 4 == 2 else "unique_class"
    assert outcome.case == expected


@pytest.mark.parametrize(
    "dim,singular,singular_dim,involution",
    [
        (1, "empty", None, False),
        (3, "empty", 1, False),
        (3, "empty", None, True),
        (3, "zero_dim", 0, False),
        (7, "zero_dim", 0, True),
        (6, "zero_dim", 2, False),
        (2, "positive_dim", None, False),
        (6, "positive_dim", 5, False),
        (6, "positive_dim", 3, False),
        (6, "positive_dim", 0, False),
    ],
)
def test_inconsistent_profiles(dim, singular, singular_dim, involution):
    with pytest.raises(ProfileError):
        classify(dim, singular, singular_dim, involution)


def test_lattice_context_wording():
    manifold = classify(7, "empty")
    lattice = classify(7, "empty", context="lattice")
    assert manifold.case == lattice.case == "unique_class"
    assert "strong rigidity" in lattice.description
    assert manifold.description != lattice.description


def test_summary():
    assert classify(6, "zero_dim", 0, True).summary == "countably_many; locally_rigid=true"
    assert classify(5, "positive_dim").summary == "continuum; locally_rigid=false"


ERROR = "error"

# ambient_dim, singular, order-2 element with a fixed point, case, locally rigid
FULL_TABLE = [
    (3, "empty", False, "unique_class", True),
    (3, "empty", True, ERROR, None),
    (3, "zero_dim", False, ERROR, None),
    (3, "zero_dim", True, ERROR, None),
    (3, "positive_dim", False, "continuum", False),
    (3, "positive_dim", True, "continuum", False),
    (4, "empty", False, "dim4_discrete_unknown", True),
    (4, "empty", True, ERROR, None),
    (4, "zero_dim", False, "dim4_discrete_unknown", True),
    (4, "zero_dim", True, "dim4_discrete_unknown", True),
    (4, "positive_dim", False, "dim4_positive_continuum", False),
    (4, "positive_dim", True, "dim4_positive_continuum", False),
    (5, "empty", False, "unique_class", True),
    (5, "empty", True, ERROR, None),
    (5, "zero_dim", False, ERROR, None),
    (5, "zero_dim", True, ERROR, None),
    (5, "positive_dim", False, "continuum", False),
    (5, "positive_dim", True, "continuum", False),
    (6, "empty", False, "unique_class", True),
    (6, "empty", True, ERROR, None),
    (6, "zero_dim", False, "unique_class", True),
    (6, "zero_dim", True, "countably_many", True),
    (6, "positive_dim", False, "continuum", False),
    (6, "positive_dim", True, "continuum", False),
    (7, "empty", False, "unique_class", True),
    (7, "empty", True, ERROR, None),
    (7, "zero_dim", False, ERROR, None),
    (7, "zero_dim", True, ERROR, None),
    (7, "positive_dim", False, "continuum", False),
    (7, "positive_dim", True, "continuum", False),
    (8, "empty", False, "unique_class", True),
    (8, "empty", True, ERROR, None),
    (8, "zero_dim", False, "unique_class", True),
    (8, "zero_dim", True, "unique_class", True),
    (8, "positive_dim", False, "continuum", False),
    (8, "positive_dim", True, "continuum", False),
    (9, "empty", False, "unique_class", True),
    (9, "empty", True, ERROR, None),
    (9, "zero_dim", False, ERROR, None),
    (9, "zero_dim", True, ERROR, None),
    (9, "positive_dim", False, "continuum", False),
    (9, "positive_dim", True, "continuum", False),
    (10, "empty", False, "unique_class", True),
    (10, "empty", True, ERROR, None),
    (10, "zero_dim", False, "unique_class", True),
    (10, "zero_dim", True, "countably_many", True),
    (10, "positive_dim", False, "continuum", False),
    (10, "positive_dim", True, "continuum", False),
    (11, "empty", False, "unique_class", True),
    (11, "empty", True, ERROR, None),
    (11, "zero_dim", False, ERROR, None),
    (11, "zero_dim", True, ERROR, None),
    (11, "positive_dim", False, "continuum", False),
    (11, "positive_dim", True, "continuum", False),
    (12, "empty", False, "unique_class", True),
    (12, "empty", True, ERROR, None),
    (12, "zero_dim", False, "unique_class", True),
    (12, "zero_dim", True, "unique_class", True),
    (12, "positive_dim", False, "continuum", False),
    (12, "positive_dim", True, "continuum", False),
    (13, "empty", False, "unique_class", True),
    (13, "empty", True, ERROR, None),
    (13, "zero_dim", False, ERROR, None),
    (13, "zero_dim", True, ERROR, None),
    (13, "positive_dim", False, "continuum", False),
    (13, "positive_dim", True, "continuum", False),
    (14, "empty", False, "unique_class", True),
    (14, "empty", True, ERROR, None),
    (14, "zero_dim", False, "unique_class", True),
    (14, "zero_dim", True, "countably_many", True),
    (14, "positive_dim", False, "continuum", False),
    (14, "positive_dim", True, "continuum", False),
    (15, "empty", False, "unique_class", True),
    (15, "empty", True, ERROR, None),
    (15, "zero_dim", False, ERROR, None),
    (15, "zero_dim", True, ERROR, None),
    (15, "positive_dim", False, "continuum", False),
    (15, "positive_dim", True, "continuum", False),
    (16, "empty", False, "unique_class", True),
    (16, "empty", True, ERROR, None),
    (16, "zero_dim", False, "unique_class", True),
    (16, "zero_dim", True, "unique_class", True),
    (16, "positive_dim", False, "continuum", False),
    (16, "positive_dim", True, "continuum", False),
    (17, "empty", False, "unique_class", True),
    (17, "empty", True, ERROR, None),
    (17, "zero_dim", False, ERROR, None),
    (17, "zero_dim", True, ERROR, None),
    (17, "positive_dim", False, "continuum", False),
    (17, "positive_dim", True, "continuum", False),
    (18, "empty", False, "unique_class", True),
    (18, "empty", True, ERROR, None),
    (18, "zero_dim", False, "unique_class", True),
    (18, "zero_dim", True, "countably_many", True),
    (18, "positive_dim", False, "continuum", False),
    (18, "positive_dim", True, "continuum", False),
    (19, "empty", False, "unique_class", True),
    (19, "empty", True, ERROR, None),
    (19, "zero_dim", False, ERROR, None),
    (19, "zero_dim", True, ERROR, None),
    (19, "positive_dim", False, "continuum", False),
    (19, "positive_dim", True, "continuum", False),
    (20, "empty", False, "unique_class", True),
    (20, "empty", True, ERROR, None),
    (20, "zero_dim", False, "unique_class", True),
    (20, "zero_dim", True, "unique_class", True),
    (20, "positive_dim", False, "continuum", False),
    (20, "positive_dim", True, "continuum", False),
]


def test_full_table_covers_the_grid():
    assert len(FULL_TABLE) == 18 * 3 * 2
    assert len({row[:3] for row in FULL_TABLE}) == len(FULL_TABLE)


@pytest.mark.parametrize("dim,singular,involution,case,rigid", FULL_TABLE)
def test_full_table(dim, singular, involution, case, rigid):
    if case == ERROR:
        with pytest.raises(ProfileError):
            classify(dim, singular, involution=involution)
        return
    outcome = classify(dim, singular, involution=involution)
    assert outcome.case == case
    assert outcome.locally_rigid is rigid


@pytest.mark.parametrize("dim", [d for d in range(3, 21) if d != 4])
def test_cases_partition_valid_profiles(dim):
    for singular in ("empty", "zero_dim", "positive_dim"):
        for involution in (False, True):
            try:
                case = classify(dim, singular, involution=involution).case
            except ProfileError:
                continue
            unique = singular == "empty" or (
                singular == "zero_dim" and (dim % 4 == 0 or not involution)
            )
            countable = dim % 4 == 2 and singular == "zero_dim" and involution
            continuum = singular == "positive_dim"
            assert [unique, countable, continuum].count(True) == 1
            assert case == ("unique_class" if unique else "countably_many" if countable else "continuum")

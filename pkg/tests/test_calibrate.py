from __future__ import annotations

import pytest

from looplab import calibrate
from looplab.calibrate import (
    CalibrationError,
    PatchRecipe,
    calibration_targets,
    canonical_patch,
    canonical_recipes,
    patch_kind,
)
from looplab.fpl import EMPTY, FREE, OCC, generating_vector


def test_persisted_recipes():
    recipes = canonical_recipes()
    assert set(recipes) == {"one", "two-odd"}
    assert recipes["one"].vertical == "crossing"
    assert recipes["two-odd"].horizontal == "crossing"


@pytest.mark.parametrize("kind", ["one", "two-odd"])
def test_persisted_recipes_hit_their_targets(kind):
    recipe = canonical_recipes()[kind]
    for L, target in calibration_targets(kind).items():
        assert generating_vector(recipe.build(L)) == target


def test_recipe_json_round_trip():
    r = canonical_recipes()["one"]
    assert PatchRecipe.from_json(r.to_json()) == r


def test_recipe_shapes_and_terminals():
    one = canonical_recipes()["one"]
    two = canonical_recipes()["two-odd"]
    for L in range(1, 7):
        spec = one.build(L)
        assert (spec.rows, spec.cols, spec.L) == (L, L, L)
        assert spec.boundary == ")"
    for L in (1, 3, 5, 7):
        spec = two.build(L)
        assert (spec.rows, spec.cols, spec.L) == (L + 1, L, L)
        assert spec.boundary == "|"


def test_side_options_count_from_the_top_right_corner():
    r = PatchRecipe("one", "all-occupied", "all-empty", "odd-occupied/rest-empty",
                    "even-occupied/rest-free", "crossing")
    c = r.constraints(3)
    assert [c[(3, col, "S")] for col in (3, 2, 1)] == [OCC, EMPTY, OCC]
    assert [c[(row, 1, "W")] for row in (1, 2, 3)] == [FREE, OCC, FREE]


def test_wrong_terminal_count_is_rejected():
    r = PatchRecipe("one", "all-occupied", "all-occupied", "all-occupied", "all-occupied", "crossing")
    with pytest.raises(ValueError):
        r.build(3)


def test_patch_kind():
    assert patch_kind("one", 4) == "one"
    assert patch_kind("two", 3) == "two-odd"
    assert patch_kind("two", 4) == "two-even"


def test_even_two_boundary_is_unresolved():
    with pytest.raises(CalibrationError) as info:
        canonical_patch("two", 4)
    assert len(info.value.survivors) > 1
    assert all(r.kind == "two-even" for r in info.value.survivors)


def test_even_two_boundary_search_reports_survivors():
    survivors = calibrate.search("two-even")
    assert len(survivors) > 1
    with pytest.raises(CalibrationError):
        calibrate.calibrate_recipe("two-even")


def test_unknown_kind():
    with pytest.raises(ValueError):
        calibration_targets("three")

"""Search for the patch boundary conditions that reproduce known ground states.

A :class:`PatchRecipe` names one option per patch side and one statistic per
boundary; it builds a concrete :class:`PatchSpec` for any size ``L``.  The
calibration search tries every recipe in a small family against target
generating vectors and insists on exactly one survivor.

Parity options on a side count the edges from the top-right corner of the
patch (the corner on both mirror axes of the host grid), so one recipe covers
odd and even ``L`` alike.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Mapping

from .fpl import (
    EMPTY,
    FREE,
    OCC,
    Constraint,
    Edge,
    PatchSpec,
    StatDef,
    boundary_statistics,
    enumerate_fpl,
    generating_vector,
    grid_edges,
    side_edges,
)
from .links import BAR, CLOSE
from .poly import MultiPoly

SIDE_OPTIONS = (
    "all-occupied",
    "all-empty",
    "all-free",
    "odd-occupied/rest-empty",
    "even-occupied/rest-empty",
    "odd-occupied/rest-free",
    "even-occupied/rest-free",
)

# external: occupied external edges on the side itself
# crossing: occupied edges between the first and second vertex row (column)
# straight: vertices on the first row (last column) carrying a straight segment
STAT_CANDIDATES = ("external", "crossing", "straight")

KINDS = ("one", "two-odd", "two-even")
SIDES = ("top", "right", "bottom", "left")


class CalibrationError(RuntimeError):
    def __init__(self, message: str, survivors: list["PatchRecipe"]):
        super().__init__(message)
        self.survivors = survivors


def _side_constraint(option: str, k: int) -> Constraint:
    if option == "all-occupied":
        return OCC
    if option == "all-empty":
        return EMPTY
    if option == "all-free":
        return FREE
    parity, rest = option.split("/")
    hit = (k % 2 == 1) == parity.startswith("odd")
    if hit:
        return OCC
    return EMPTY if rest == "rest-empty" else FREE


def _corner_index(side: str, edge: Edge, rows: int, cols: int) -> int:
    """1-based position of an external edge counted from the top-right corner."""
    r, c, _ = edge
    if side in ("top", "bottom"):
        return cols + 1 - c
    return r


def _vertical_stat(choice: str, rows: int, cols: int) -> StatDef:
    if choice == "external":
        return StatDef(choice, edges=tuple((1, c, "N") for c in range(1, cols + 1)))
    if choice == "crossing":
        return StatDef(choice, edges=tuple((1, c, "S") for c in range(1, cols + 1)))
    if choice == "straight":
        return StatDef(choice, straight=tuple((1, c, "v") for c in range(1, cols + 1)))
    raise ValueError(f"unknown statistic {choice!r}")


def _horizontal_stat(choice: str, rows: int, cols: int) -> StatDef:
    if choice == "external":
        return StatDef(choice, edges=tuple((r, cols, "E") for r in range(1, rows + 1)))
    if choice == "crossing":
        return StatDef(choice, edges=tuple((r, cols - 1, "E") for r in range(1, rows + 1)))
    if choice == "straight":
        return StatDef(choice, straight=tuple((r, cols, "h") for r in range(1, rows + 1)))
    raise ValueError(f"unknown statistic {choice!r}")


@dataclass(frozen=True)
class PatchRecipe:
    """Size-independent description of a patch family member.

    ``kind`` is ``"one"`` (``L x L`` patch, top side is the boundary) or
    ``"two-odd"``/``"two-even"`` (``L+1`` rows by ``L`` columns, with top and
    right as the two boundaries).
    """

    kind: str
    top: str
    right: str
    bottom: str
    left: str
    vertical: str
    horizontal: str | None = None

    @property
    def two_boundary(self) -> bool:
        return self.kind != "one"

    def shape(self, L: int) -> tuple[int, int]:
        return (L + 1, L) if self.two_boundary else (L, L)

    def boundary_sides(self) -> tuple[str, ...]:
        return ("top", "right") if self.two_boundary else ("top",)

    def constraints(self, L: int) -> dict[Edge, Constraint]:
        rows, cols = self.shape(L)
        out = {e: FREE for e in grid_edges(rows, cols)}
        for side in SIDES:
            option = getattr(self, side)
            for e in side_edges(side, rows, cols):
                out[e] = _side_constraint(option, _corner_index(side, e, rows, cols))
        return out

    def terminals(self, constraints: Mapping[Edge, Constraint], L: int) -> tuple[Edge, ...]:
        """Occupied external edges off the boundary sides, anticlockwise from the top-left."""
        rows, cols = self.shape(L)
        order = side_edges("left", rows, cols) + side_edges("bottom", rows, cols)
        if "right" not in self.boundary_sides():
            order += side_edges("right", rows, cols)[::-1]
        return tuple(e for e in order if constraints[e] is OCC)

    def build(self, L: int) -> PatchSpec:
        rows, cols = self.shape(L)
        constraints = self.constraints(L)
        terminals = self.terminals(constraints, L)
        if len(terminals) != L:
            raise ValueError(f"recipe gives {len(terminals)} terminals for L={L}")
        stats = {"vertical_top": _vertical_stat(self.vertical, rows, cols)}
        if self.horizontal is not None:
            stats["horizontal_last_column"] = _horizontal_stat(self.horizontal, rows, cols)
        return PatchSpec(
            rows,
            cols,
            constraints,
            stats,
            terminals,
            boundary=BAR if self.two_boundary else CLOSE,
            name=f"{self.kind}-L{L}",
        )

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: Mapping) -> "PatchRecipe":
        return cls(**data)


# -- targets ----------------------------------------------------------------

def _p(text: str) -> MultiPoly:
    return MultiPoly.parse(text)


def calibration_targets(kind: str) -> dict[int, dict[str, MultiPoly]]:
    """Generating vectors each recipe of ``kind`` must reproduce, keyed by ``L``."""
    if kind == "one":
        return {
            3: {")))": _p("a"), "())": _p("2"), ")()": _p("a + 2")},
            4: {
                "))))": _p("a^2"),
                "))()": _p("3*a^2 + 6*a"),
                ")())": _p("2*a^2 + 6*a"),
                "()))": _p("3*a"),
                "()()": _p("3*a + 6"),
                "(())": _p("3"),
            },
        }
    if kind == "two-odd":
        return {3: {"|||": _p("a*b + a + b"), "()|": _p("b + 2"), "|()": _p("a + 2")}}
    if kind == "two-even":
        return {2: {"||": _p("a + b"), "()": _p("1")}}
    raise ValueError(f"unknown patch kind {kind!r}")


# -- search -----------------------------------------------------------------

def _recipes(kind: str):
    two = kind != "one"
    stats = [(v, h) for v in STAT_CANDIDATES for h in (STAT_CANDIDATES if two else (None,))]
    for sides in itertools.product(SIDE_OPTIONS, repeat=4):
        top, right, bottom, left = sides
        yield [PatchRecipe(kind, top, right, bottom, left, v, h) for v, h in stats]


# Sizes over which two surviving recipes must agree to count as the same spec.
EQUIVALENCE_SIZES = {"one": range(1, 7), "two-odd": range(1, 6, 2), "two-even": range(2, 5, 2)}


def _signature(recipe: PatchRecipe, L: int) -> tuple:
    """Configurations with terminals and weight exponents; equal signatures mean equal patches at ``L``."""
    try:
        spec = recipe.build(L)
    except ValueError:
        return ("unbuildable",)
    rows = []
    for c in enumerate_fpl(spec, workers=1):
        v, h = boundary_statistics(c, spec)
        rows.append((tuple(sorted(c.occupied)), v // 2, h // 2))
    return spec.terminal_labels, tuple(sorted(rows))


@functools.lru_cache(maxsize=None)
def search(kind: str) -> tuple[PatchRecipe, ...]:
    """Every recipe of ``kind`` matching all targets, one per equivalence class."""
    targets = calibration_targets(kind)
    survivors: list[PatchRecipe] = []
    for group in _recipes(kind):
        base = group[0]
        configs = {}
        try:
            for L in targets:
                spec = base.build(L)
                configs[L] = enumerate_fpl(spec, workers=1)
        except ValueError:
            continue
        if any(len(configs[L]) == 0 for L in targets):
            continue
        for recipe in group:
            try:
                ok = all(generating_vector(recipe.build(L), configs[L]) == target
                         for L, target in targets.items())
            except ValueError:
                ok = False
            if ok:
                survivors.append(recipe)
    unique: dict[tuple, PatchRecipe] = {}
    for recipe in survivors:
        sig = tuple(_signature(recipe, L) for L in EQUIVALENCE_SIZES[kind])
        unique.setdefault(sig, recipe)
    return tuple(unique.values())


def _data_path():
    return resources.files("looplab") / "data" / "patches.json"


def _load() -> dict:
    data = json.loads(_data_path().read_text())
    if data.get("format") != "looplab-recipes" or data.get("version") != 1:
        raise ValueError("unsupported recipe file")
    return data


def canonical_recipes() -> dict[str, PatchRecipe]:
    """Recipes persisted after calibration, keyed by kind."""
    return {k: PatchRecipe.from_json(v) for k, v in _load()["recipes"].items()}


def _failure(kind: str, survivors: list[PatchRecipe]) -> CalibrationError:
    listing = "\n  ".join(str(r) for r in survivors) or "(none)"
    return CalibrationError(
        f"calibration of {kind!r} left {len(survivors)} candidate specs:\n  {listing}", survivors
    )


def calibrate_recipe(kind: str) -> PatchRecipe:
    survivors = list(search(kind))
    if len(survivors) != 1:
        raise _failure(kind, survivors)
    return survivors[0]


def patch_kind(mode: str, L: int) -> str:
    if mode == "one":
        return "one"
    return "two-odd" if L % 2 else "two-even"


def calibrate_patch(kind: str, L: int) -> PatchSpec:
    """Run the search for ``kind`` and build the unique survivor at size ``L``."""
    return calibrate_recipe(kind).build(L)


def canonical_patch(mode: str, L: int) -> PatchSpec:
    """Patch built from the persisted recipe for this mode and parity.

    Kinds whose calibration did not single out one recipe raise
    :class:`CalibrationError` with the stored survivor list.
    """
    kind = patch_kind(mode, L)
    data = _load()
    if kind in data["recipes"]:
        return PatchRecipe.from_json(data["recipes"][kind]).build(L)
    survivors = [PatchRecipe.from_json(r) for r in data["unresolved"].get(kind, [])]
    raise _failure(kind, survivors)


def write_canonical(path=None) -> dict:
    """Run every calibration and store unique recipes (and survivor lists otherwise)."""
    recipes = {}
    unresolved = {}
    for kind in KINDS:
        survivors = search(kind)
        if len(survivors) == 1:
            recipes[kind] = survivors[0].to_json()
        else:
            unresolved[kind] = [r.to_json() for r in survivors]
    data = {"format": "looplab-recipes", "version": 1, "recipes": recipes, "unresolved": unresolved}
    target = path or _data_path()
    with open(target, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return data

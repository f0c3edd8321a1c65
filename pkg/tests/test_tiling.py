"""Isometry algebra, recipes, patch generation, and the arrangement."""
import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pentile
from pentile.arrangement import Patch
from pentile.errors import ParseError, RecipeInvalid, TypeMismatch
from pentile.geometry import polygon_centroid
from pentile.tiling import (
    Isometry,
    TilingRecipe,
    builtin_recipe,
    congruence_defect,
    generate_patch,
    load_recipe,
    save_recipe,
    tile_diameter,
)

DATA = Path(__file__).parent / "data"

angles = st.floats(-math.pi, math.pi, allow_nan=False)
coords = st.floats(-10.0, 10.0, allow_nan=False)
points = st.tuples(coords, coords)


def isometries():
    return st.builds(Isometry, rotation=angles,
                     translation=points, reflect=st.booleans())


def house():
    return pentile.load_pentagon(DATA / "house.json")


# --- isometry algebra -------------------------------------------------------

@given(isometries(), isometries(), points)
def test_compose_matches_sequential_application(a, b, x):
    composed = a.compose(b)
    expected = a.apply(b.apply(np.array(x)))
    assert np.allclose(composed.apply(np.array(x)), expected, atol=1e-9)


@given(isometries(), points)
def test_inverse_round_trips(iso, x):
    p = np.array(x)
    assert np.allclose(iso.inverse().apply(iso.apply(p)), p, atol=1e-9)
    assert np.allclose(iso.apply(iso.inverse().apply(p)), p, atol=1e-9)


@given(isometries(), isometries())
def test_compose_reflect_parity(a, b):
    assert a.compose(b).reflect == (a.reflect ^ b.reflect)


@given(points, points, points, angles, st.booleans())
def test_match_segment_maps_endpoints(p0, p1, q0, theta, reflect):
    p0, p1 = np.array(p0), np.array(p1)
    if np.linalg.norm(p1 - p0) < 1e-3:
        p1 = p0 + np.array([1.0, 0.0])
    q0 = np.array(q0)
    q1 = q0 + pentile.geometry.rot_matrix(theta) @ (p1 - p0)
    iso = Isometry.match_segment(p0, p1, q0, q1, reflect=reflect)
    assert iso.reflect == reflect
    assert np.allclose(iso.apply(p0), q0, atol=1e-9)
    assert np.allclose(iso.apply(p1), q1, atol=1e-9)


def test_match_segment_rejects_length_mismatch():
    with pytest.raises(ValueError):
        Isometry.match_segment((0, 0), (1, 0), (0, 0), (2, 0))


@given(isometries(), points, points)
def test_isometry_preserves_distances(iso, x, y):
    p, q = np.array(x), np.array(y)
    d0 = np.linalg.norm(p - q)
    d1 = np.linalg.norm(iso.apply(p) - iso.apply(q))
    assert d1 == pytest.approx(d0, abs=1e-9)


def test_isometry_json_round_trip():
    iso = Isometry(rotation=0.7, translation=(1.5, -2.25), reflect=True)
    back = Isometry.from_json_dict(iso.to_json_dict())
    assert back.reflect is True
    assert back.rotation == pytest.approx(iso.rotation)
    assert back.translation == pytest.approx(iso.translation)


def test_isometry_bad_record():
    with pytest.raises(ParseError):
        Isometry.from_json_dict({"rot_deg": "spin"})


# --- recipes ----------------------------------------------------------------

def test_builtin_recipe_round_trips_through_json():
    recipe = builtin_recipe(1, house())
    back = load_recipe(save_recipe(recipe))
    assert len(back.region) == len(recipe.region)
    assert back.u == pytest.approx(recipe.u)
    assert back.v == pytest.approx(recipe.v)
    assert np.allclose(back.pentagon.vertices, recipe.pentagon.vertices)


def test_parallel_lattice_vectors_rejected():
    with pytest.raises(RecipeInvalid):
        TilingRecipe(pentagon=house(), region=(Isometry.identity(),),
                     u=(1.0, 0.0), v=(2.0, 0.0))


def test_empty_region_rejected():
    with pytest.raises(RecipeInvalid):
        TilingRecipe(pentagon=house(), region=(),
                     u=(1.0, 0.0), v=(0.0, 1.0))


def test_load_recipe_parse_errors():
    with pytest.raises(ParseError):
        load_recipe("{not json")
    with pytest.raises(ParseError):
        load_recipe({"pentagon": {}})
    with pytest.raises(ParseError):
        load_recipe(json.dumps([1, 2, 3]))


def test_hand_encoded_type5_recipe_file():
    document = json.loads((DATA / "type5_recipe.json").read_text())
    recipe = load_recipe(document)
    assert len(recipe.region) == 6
    report = pentile.check_periodicity(recipe)
    assert report.ok, report.violations


def test_builtin_recipe_rejects_regular_pentagon():
    regular = pentile.make_pentagon([math.radians(108)] * 5, [1.0] * 5)
    with pytest.raises(TypeMismatch):
        builtin_recipe(1, regular)


def test_builtin_recipe_type1_house_has_two_tiles():
    recipe = builtin_recipe(1, house())
    assert len(recipe.region) == 2
    report = pentile.check_periodicity(recipe)
    assert report.ok, report.violations


def test_builtin_recipe_type4_has_four_tiles():
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    assert len(recipe.region) == 4
    assert pentile.check_periodicity(recipe).ok


@pytest.mark.parametrize("type_id", [1, 2, 4, 5])
def test_placed_tiles_congruent_to_recipe_pentagon(type_id):
    recipe = builtin_recipe(type_id, pentile.representative(type_id).pentagon)
    patch = generate_patch(recipe, 6.0)
    worst = max(congruence_defect(t, recipe.pentagon) for t in patch.tiles)
    assert worst <= 1e-9


# --- patch generation -------------------------------------------------------

def test_small_radius_gives_single_f1_tile():
    recipe = builtin_recipe(5, pentile.representative(5).pentagon)
    base = recipe.region_polygons()[0]
    centroid = polygon_centroid(base)
    circumradius = max(np.linalg.norm(v - centroid) for v in base)
    patch = generate_patch(recipe, 1.02 * circumradius, M=centroid)
    f1 = [t for t in patch.tiles if t.zone == "F1"]
    assert len(f1) == 1
    assert np.allclose(np.sort(f1[0].polygon, axis=0),
                       np.sort(base, axis=0), atol=1e-9)
    assert all(t.zone in ("F1", "F2", "F3") for t in patch.tiles)
    assert any(t.zone == "F2" for t in patch.tiles)


@pytest.mark.parametrize("type_id", [1, 2, 4, 5])
def test_euler_characteristic_is_one(type_id):
    recipe = builtin_recipe(type_id, pentile.representative(type_id).pentagon)
    patch = generate_patch(recipe, 8.0)
    assert patch.euler_characteristic() == 1


def test_doubling_radius_roughly_quadruples_tiles():
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    r = 10.0 * tile_diameter(recipe.pentagon)
    small = generate_patch(recipe, r).tile_count
    big = generate_patch(recipe, 2 * r).tile_count
    assert 3.5 <= big / small <= 4.5


def test_generate_patch_rejects_nonpositive_radius():
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    with pytest.raises(ParseError):
        generate_patch(recipe, 0.0)


def test_patch_translation_maps_interior_tiles_into_patch():
    """Shifting an interior tile by a lattice vector lands on another tile."""
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    patch = generate_patch(recipe, 8.0)
    centroids = {(t.cell, round(polygon_centroid(t.polygon)[0], 6),
                  round(polygon_centroid(t.polygon)[1], 6))
                 for t in patch.tiles}
    keyed = {(c[1], c[2]) for c in centroids}
    u = np.array(recipe.u)
    hits = misses = 0
    for t in (patch.tiles[i] for i in patch.interior_tile_ids()):
        c = polygon_centroid(t.polygon) + u
        if (round(c[0], 6), round(c[1], 6)) in keyed:
            hits += 1
        else:
            misses += 1  # image fell off the window edge
    assert hits > 0
    assert hits >= misses


# --- arrangement: adjacents, neighbors, pseudo-vertices ---------------------

def brick_wall_fixture() -> Patch:
    """Running-bond bricks: the classic adjacent-versus-neighbor picture.

    Center brick T sits at [0,2]x[0,1]. The row above is aligned with T, so
    its outer bricks touch T at single corner points; the row below is offset
    by half a brick, splitting T's bottom side at (1,0).
    """
    def brick(x, y):
        return [(x, y), (x + 2, y), (x + 2, y + 1), (x, y + 1)]

    polys = [
        brick(0, 0),      # 0: T
        brick(0, 1),      # 1: directly above, full side shared
        brick(-2, 0),     # 2: left
        brick(2, 0),      # 3: right
        brick(-1, -1),    # 4: below left, offset
        brick(1, -1),     # 5: below right, offset
        brick(-2, 1),     # 6: above left, corner contact only
        brick(2, 1),      # 7: above right, corner contact only
    ]
    return Patch.from_polygons(polys)


def test_brick_wall_adjacents_and_neighbors():
    patch = brick_wall_fixture()
    assert patch.adjacents[0] == {1, 2, 3, 4, 5}
    assert patch.neighbors[0] == {1, 2, 3, 4, 5, 6, 7}
    for t in range(patch.tile_count):
        assert patch.adjacents[t] <= patch.neighbors[t]


def test_brick_wall_vertex_valences_and_pseudo_flags():
    patch = brick_wall_fixture()
    by_xy = {v.xy: v for v in patch.vertices}
    for corner in ((0.0, 1.0), (2.0, 1.0)):
        assert by_xy[corner].valence == 4
        assert not by_xy[corner].pseudo
        assert by_xy[corner].complete
    for split in ((0.0, 0.0), (1.0, 0.0), (2.0, 0.0)):
        assert by_xy[split].valence == 3
        assert by_xy[split].pseudo
        assert by_xy[split].complete


def test_two_pentagons_sharing_a_side_are_adjacent():
    p = house()
    mirrored = p.vertices * np.array([1.0, -1.0])
    patch = Patch.from_polygons([p.vertices, mirrored[::-1]])
    assert patch.adjacents[0] == {1}
    assert patch.neighbors[0] == {1}


def test_corner_contact_is_neighbor_not_adjacent():
    square = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
    other = square + np.array([1.0, 1.0])
    patch = Patch.from_polygons([square, other])
    assert patch.adjacents[0] == frozenset()
    assert patch.neighbors[0] == {1}


def test_type4_patch_is_edge_to_edge():
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    patch = generate_patch(recipe, 8.0)
    complete = [patch.vertices[i] for i in patch.complete_vertex_ids()]
    assert complete
    assert not any(v.pseudo for v in complete)
    assert all(v.valence >= 3 for v in complete)


def test_type1_house_tiling_is_all_three_valent_with_pseudo_vertices():
    recipe = builtin_recipe(1, house())
    patch = generate_patch(recipe, 10.0)
    complete = [patch.vertices[i] for i in patch.complete_vertex_ids()]
    assert complete
    assert all(v.valence == 3 for v in complete)
    assert any(v.pseudo for v in complete)


def test_classify_adjacency_and_detect_vertices_views():
    patch = brick_wall_fixture()
    info = pentile.classify_adjacency(patch)
    assert info.adjacents == patch.adjacents
    assert info.neighbors == patch.neighbors
    assert pentile.detect_vertices(patch) == patch.vertices


def test_patch_json_round_trip():
    recipe = builtin_recipe(1, house())
    patch = generate_patch(recipe, 6.0)
    back = pentile.patch_from_json_dict(patch.to_json_dict())
    assert back.tile_count == patch.tile_count
    assert back.vertex_count == patch.vertex_count
    assert back.edge_count == patch.edge_count
    assert back.euler_characteristic() == 1


@settings(max_examples=25)
@given(st.floats(5.0, 9.0))
def test_every_edge_borders_at_most_two_tiles(r):
    recipe = builtin_recipe(4, pentile.representative(4).pentagon)
    patch = generate_patch(recipe, r)
    assert all(len(e.tiles) <= 2 for e in patch.edges)

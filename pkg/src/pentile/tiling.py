"""Periodic tilings as fundamental-region recipes, and disk-generated patches.

A recipe is one pentagon, a list of isometries placing the tiles of a
fundamental region, and two lattice translation vectors. Replicating the
region over the lattice tiles the plane; a patch is the finite piece of that
tiling generated by a disk.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ParseError, RecipeInvalid, TypeMismatch, UnknownType
from .geometry import (
    min_distance_to_polygon,
    polygon_area,
    polygon_centroid,
    rot_matrix,
)
from .pentagon import Pentagon, pentagon_from_json_dict, pentagon_to_json

LATTICE_TOL = 1e-12        # |u x v| below this (relative) means parallel
CONGRUENCE_TOL = 1e-9


@dataclass(frozen=True)
class Isometry:
    """Plane isometry: reflect across the x-axis, rotate, then translate."""

    rotation: float = 0.0
    translation: tuple[float, float] = (0.0, 0.0)
    reflect: bool = False

    @classmethod
    def identity(cls) -> "Isometry":
        return cls()

    @classmethod
    def rotation_about(cls, angle: float, center) -> "Isometry":
        c = np.asarray(center, dtype=float)
        t = c - rot_matrix(angle) @ c
        return cls(rotation=angle, translation=tuple(t))

    @classmethod
    def half_turn(cls, center) -> "Isometry":
        return cls.rotation_about(math.pi, center)

    @classmethod
    def translation_by(cls, vector) -> "Isometry":
        return cls(translation=tuple(np.asarray(vector, dtype=float)))

    @classmethod
    def match_segment(cls, p0, p1, q0, q1, reflect: bool = False) -> "Isometry":
        """The isometry sending segment p0-p1 onto segment q0-q1.

        Segments must have equal length; with reflect=True the map reverses
        orientation.
        """
        p0, p1, q0, q1 = (np.asarray(x, dtype=float) for x in (p0, p1, q0, q1))
        lp, lq = np.linalg.norm(p1 - p0), np.linalg.norm(q1 - q0)
        if abs(lp - lq) > 1e-9 * max(lp, lq):
            raise ValueError(f"segment lengths differ: {lp} vs {lq}")
        ang_p = math.atan2(*(p1 - p0)[::-1])
        ang_q = math.atan2(*(q1 - q0)[::-1])
        rotation = ang_q + ang_p if reflect else ang_q - ang_p
        iso = cls(rotation=rotation, reflect=reflect)
        t = q0 - iso.apply(p0)
        return cls(rotation=rotation, translation=tuple(t), reflect=reflect)

    def matrix(self) -> np.ndarray:
        m = rot_matrix(self.rotation)
        if self.reflect:
            m = m @ np.diag([1.0, -1.0])
        return m

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.matrix().T + np.asarray(self.translation)

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other: (self.compose(other)).apply(x) = self(other(x))."""
        rotation = self.rotation + (-other.rotation if self.reflect
                                    else other.rotation)
        return Isometry(rotation=rotation,
                        translation=tuple(self.apply(other.translation)),
                        reflect=self.reflect ^ other.reflect)

    def inverse(self) -> "Isometry":
        t = np.asarray(self.translation)
        if self.reflect:
            rotation = self.rotation
            m = rot_matrix(rotation) @ np.diag([1.0, -1.0])
        else:
            rotation = -self.rotation
            m = rot_matrix(rotation)
        return Isometry(rotation=rotation, translation=tuple(-(m @ t)),
                        reflect=self.reflect)

    def to_json_dict(self) -> dict:
        return {"rot_deg": math.degrees(self.rotation),
                "tx": self.translation[0], "ty": self.translation[1],
                "reflect": self.reflect}

    @classmethod
    def from_json_dict(cls, record: Mapping) -> "Isometry":
        try:
            return cls(rotation=math.radians(float(record["rot_deg"])),
                       translation=(float(record["tx"]), float(record["ty"])),
                       reflect=bool(record.get("reflect", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad isometry record: {exc}") from None


@dataclass(frozen=True)
class TilingRecipe:
    pentagon: Pentagon
    region: tuple[Isometry, ...]
    u: tuple[float, float]
    v: tuple[float, float]

    def __post_init__(self):
        cross = self.u[0] * self.v[1] - self.u[1] * self.v[0]
        scale = self.pentagon.mean_edge() ** 2
        if abs(cross) <= LATTICE_TOL * max(scale, 1e-30):
            raise RecipeInvalid("lattice vectors u, v are parallel")
        if not self.region:
            raise RecipeInvalid("fundamental region holds no tiles")

    def region_polygons(self) -> list[np.ndarray]:
        """Region tiles as ccw polygons (reflected placements come out
        clockwise and are reversed)."""
        base = self.pentagon.vertices
        return [_ccw(iso.apply(base)) for iso in self.region]

    def cell_area(self) -> float:
        return abs(self.u[0] * self.v[1] - self.u[1] * self.v[0])

    def to_json_dict(self) -> dict:
        return {"pentagon": json.loads(pentagon_to_json(self.pentagon)),
                "region": [iso.to_json_dict() for iso in self.region],
                "lattice": [list(self.u), list(self.v)]}


def save_recipe(recipe: TilingRecipe) -> str:
    return json.dumps(recipe.to_json_dict(), sort_keys=True, indent=2)


def load_recipe(document) -> TilingRecipe:
    """Build a recipe from a JSON string or an already-parsed mapping."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"recipe is not valid JSON: {exc}") from None
    if not isinstance(document, Mapping):
        raise ParseError("recipe document must be a JSON object")
    try:
        pentagon_doc = document["pentagon"]
        region_docs = document["region"]
        (ux, uy), (vx, vy) = document["lattice"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"recipe is missing fields: {exc}") from None
    pentagon = pentagon_from_json_dict(pentagon_doc)
    region = tuple(Isometry.from_json_dict(r) for r in region_docs)
    return TilingRecipe(pentagon=pentagon, region=region,
                        u=(float(ux), float(uy)), v=(float(vx), float(vy)))


@dataclass(frozen=True)
class PlacedTile:
    iso: Isometry
    cell: tuple[int, int]
    polygon: np.ndarray        # counterclockwise, even for reflected tiles
    zone: str = ""             # F1, F2 or F3 once patch-classified


# --- built-in fundamental regions for Types 1, 2, 4 and 5 ------------------
#
# each builder returns candidate (region, u, v) triples, best first; the
# first one that passes verification wins

def _type1_region(p: Pentagon):
    """Pair a pentagon with a half-turned copy; two ways.

    Gluing along side b interlocks straight rows that may slide freely, so
    row offsets avoid corner-on-corner contact; it only closes up for
    special shapes like the house pentagon. Gluing along side d always
    works: D + E = 180 makes that union a centrally symmetric hexagon,
    which tiles by translation.
    """
    vv = p.vertices
    u = vv[2] - vv[0]
    candidates = []
    mid_b = (vv[1] + vv[2]) / 2.0
    row_pair = (Isometry.identity(), Isometry.half_turn(mid_b))
    for slide in (0.25, 1.0 / 3.0):
        v = (vv[1] + vv[2] - 2.0 * vv[3]) + slide * u
        candidates.append((row_pair, u, v))
    mid_d = (vv[3] + vv[4]) / 2.0
    hex_pair = (Isometry.identity(), Isometry.half_turn(mid_d))
    candidates.append((hex_pair, u, (2.0 * mid_d - vv[1]) - vv[2]))
    return candidates

def _type2_region(p: Pentagon):
    """Four tiles: a reflected copy glued a-onto-d, plus half turns of both.

    Needs a = d and A + D = 180 (the Type 2 conditions) so the glue seam is
    flat; the pair then repeats by a glide and a translation.
    """
    vv = p.vertices
    flip = Isometry.match_segment(vv[0], vv[1], vv[3], vv[4], reflect=True)
    mid_pb = (vv[1] + vv[2]) / 2.0
    mid_qb = (flip.apply(vv[1]) + flip.apply(vv[2])) / 2.0
    glide = Isometry.half_turn(mid_qb).compose(flip)
    region = (Isometry.identity(), flip, glide, Isometry.half_turn(mid_pb))
    u = 2.0 * (mid_pb - mid_qb)
    doubled = glide.compose(glide)
    v = np.asarray(doubled.translation)
    return [(region, u, v)]

def _type4_region(p: Pentagon):
    """Four tiles around the right-angle corner A; C corners pivot likewise."""
    vv = p.vertices
    region = tuple(Isometry.rotation_about(k * math.pi / 2, vv[0])
                   for k in range(4))
    c_rel = vv[2] - vv[0]
    eye = np.eye(2)
    u = (eye - rot_matrix(math.pi / 2)) @ c_rel
    v = (eye - rot_matrix(-math.pi / 2)) @ c_rel
    return [(region, u, v)]

def _type5_region(p: Pentagon):
    """Six tiles around the 60-degree corner A; 120-degree C corners pivot."""
    vv = p.vertices
    region = tuple(Isometry.rotation_about(k * math.pi / 3, vv[0])
                   for k in range(6))
    c_rel = vv[2] - vv[0]
    eye = np.eye(2)
    u = (eye - rot_matrix(2 * math.pi / 3)) @ c_rel
    v = (eye - rot_matrix(-2 * math.pi / 3)) @ c_rel
    return [(region, u, v)]

_REGION_BUILDERS = {1: _type1_region, 2: _type2_region,
                    4: _type4_region, 5: _type5_region}

BUILTIN_RECIPE_TYPES = tuple(sorted(_REGION_BUILDERS))


def builtin_recipe(type_id: int, pentagon: Pentagon) -> TilingRecipe:
    """Ready-made periodic tiling recipe for Types 1, 2, 4 and 5.

    The pentagon may be labeled any way round; it is relabeled to the
    canonical corner order of its Type first. The assembled recipe is checked
    on a 3x3 window before it is returned.
    """
    from .catalog import get_type_spec

    if type_id not in _REGION_BUILDERS:
        raise UnknownType(
            f"no built-in recipe for Type {type_id!r}; "
            f"available: {BUILTIN_RECIPE_TYPES}")
    spec = get_type_spec(type_id)
    labelings = [pentagon.relabeled(rotation=r, reflect=refl)
                 for refl in (False, True) for r in range(5)]
    fits = [q for q in labelings if spec.satisfied_by(q)]
    if not fits:
        raise TypeMismatch(
            f"pentagon does not satisfy the Type {type_id} constraints")

    from .verifier import check_periodicity

    failure = None
    for q in fits:
        for region, u, v in _REGION_BUILDERS[type_id](q):
            recipe = TilingRecipe(pentagon=q, region=region,
                                  u=tuple(u), v=tuple(v))
            report = check_periodicity(recipe)
            if report.ok:
                return recipe
            failure = report
    raise RecipeInvalid(
        f"Type {type_id} recipe failed verification: {failure.violations}")


# --- patch generation -------------------------------------------------------

def _candidate_cells(recipe: TilingRecipe, center, reach: float):
    """Lattice index ranges whose cells can intersect the disk of r=reach."""
    lattice = np.column_stack([recipe.u, recipe.v])
    inv = np.linalg.inv(lattice)
    corners = np.array(center) + reach * np.array(
        [[1, 1], [1, -1], [-1, 1], [-1, -1], [1, 0], [-1, 0], [0, 1], [0, -1]])
    coeffs = corners @ inv.T
    lo = np.floor(coeffs.min(axis=0)).astype(int) - 2
    hi = np.ceil(coeffs.max(axis=0)).astype(int) + 2
    return lo, hi


def tile_diameter(pentagon: Pentagon) -> float:
    vv = pentagon.vertices
    return max(float(np.linalg.norm(a - b)) for a in vv for b in vv)


def generate_patch(recipe: TilingRecipe, r: float, M=(0.0, 0.0),
                   snap_eps: float | None = None):
    """The patch A(r, M): tiles inside the disk, tiles meeting its boundary,
    and tiles surrounded by those. Returns an arrangement-backed Patch.

    Intended for disks larger than a single tile (r above one tile diameter);
    smaller disks still produce a patch but it may hold a tile or none.
    """
    from .arrangement import Patch

    if r <= 0:
        raise ParseError(f"disk radius must be positive, got {r}")
    center = np.asarray(M, dtype=float)
    diam = tile_diameter(recipe.pentagon)
    eps = 1e-7 * recipe.pentagon.mean_edge()
    reach = r + 4.0 * diam
    lo, hi = _candidate_cells(recipe, center, reach)
    base_polys = recipe.region_polygons()
    u = np.asarray(recipe.u)
    v = np.asarray(recipe.v)

    inner, boundary, outer = [], [], []
    for m in range(lo[0], hi[0] + 1):
        for n in range(lo[1], hi[1] + 1):
            shift = m * u + n * v
            for idx, base in enumerate(base_polys):
                poly = base + shift
                centroid_dist = np.linalg.norm(polygon_centroid(poly) - center)
                if centroid_dist > reach + diam:
                    continue
                vertex_dists = np.linalg.norm(poly - center, axis=1)
                d_max = vertex_dists.max()
                d_min = min_distance_to_polygon(center, poly)
                iso = Isometry.translation_by(shift).compose(recipe.region[idx])
                record = (iso, (m, n), poly)
                if d_max <= r - eps:
                    inner.append(record)
                elif d_min <= r + eps and d_max >= r - eps:
                    boundary.append(record)
                else:
                    outer.append(record)

    f3 = _enclosed_tiles(boundary, outer, eps)
    tiles = ([PlacedTile(iso, cell, _ccw(poly), "F1")
              for iso, cell, poly in inner]
             + [PlacedTile(iso, cell, _ccw(poly), "F2")
                for iso, cell, poly in boundary]
             + [PlacedTile(iso, cell, _ccw(poly), "F3")
                for iso, cell, poly in f3])
    return Patch.from_tiles(tiles, r=r, center=tuple(center),
                            snap_eps=snap_eps)


def _ccw(poly: np.ndarray) -> np.ndarray:
    return poly if polygon_area(poly) >= 0 else poly[::-1]


def _enclosed_tiles(boundary, outer, eps):
    """Tiles outside the disk but unreachable from far away: the F3 set.

    Flood fill across touching tiles of the outside candidates, seeded from
    the outermost ring; what the flood never reaches is enclosed by F2.
    """
    if not outer:
        return []
    from scipy.spatial import cKDTree

    centroids = np.array([polygon_centroid(poly) for _, _, poly in outer])
    radii = [np.linalg.norm(poly - c, axis=1).max()
             for (_, _, poly), c in zip(outer, centroids)]
    reach = 2.0 * max(radii) + eps
    tree = cKDTree(centroids)
    origin = centroids.mean(axis=0)
    far = np.linalg.norm(centroids - origin, axis=1)
    seeds = np.nonzero(far >= far.max() - reach)[0]

    seen = set(seeds)
    stack = list(seeds)
    while stack:
        i = stack.pop()
        for j in tree.query_ball_point(centroids[i], reach):
            if j in seen:
                continue
            if _polygons_touch(outer[i][2], outer[j][2], eps):
                seen.add(j)
                stack.append(j)
    return [outer[i] for i in range(len(outer)) if i not in seen]


def _polygons_touch(p: np.ndarray, q: np.ndarray, eps: float) -> bool:
    from .geometry import points_segment_distance

    for a, b in ((p, q), (q, p)):
        for k in range(len(b)):
            d = points_segment_distance(a, b[k], b[(k + 1) % len(b)])
            if d.min() <= eps:
                return True
    return False


def congruence_defect(tile: PlacedTile, pentagon: Pentagon) -> float:
    """Largest deviation of the placed tile's edge lengths and angles from
    the recipe pentagon's, as multisets."""
    from .geometry import interior_angles, polygon_edge_lengths

    edges = np.sort(polygon_edge_lengths(tile.polygon))
    angles = np.sort(interior_angles(tile.polygon))
    return max(float(np.max(np.abs(edges - np.sort(pentagon.edges)))),
               float(np.max(np.abs(angles - np.sort(pentagon.angles)))))

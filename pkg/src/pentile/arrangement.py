"""Planar arrangement of placed tiles.

Merges near-coincident tile corners into shared vertices, splits tile sides
at the vertices lying on them, and records incidence: which tiles meet at
each vertex, which tiles border each edge, who is adjacent to whom.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .geometry import interior_angles, point_segment_distance
from .tiling import PlacedTile

SNAP_FACTOR = 1e-7           # vertex merge radius, relative to mean edge
COMPLETE_ANGLE_TOL = 1e-6    # rad; full 360-degree surround test


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        self.parent[self.find(i)] = self.find(j)


@dataclass(frozen=True)
class PatchVertex:
    xy: tuple[float, float]
    tiles: frozenset[int]
    valence: int          # number of incident tiles
    pseudo: bool          # lies inside some incident tile's side
    complete: bool        # incident angles close up to a full turn


@dataclass(frozen=True)
class PatchEdge:
    vertices: tuple[int, int]
    tiles: frozenset[int]


@dataclass(frozen=True)
class Patch:
    tiles: tuple[PlacedTile, ...]
    vertices: tuple[PatchVertex, ...]
    edges: tuple[PatchEdge, ...]
    corner_vertices: tuple[tuple[int, ...], ...]
    tile_vertices: tuple[frozenset[int], ...]
    adjacents: tuple[frozenset[int], ...]
    neighbors: tuple[frozenset[int], ...]
    r: float | None = None
    center: tuple[float, float] | None = None

    @property
    def tile_count(self) -> int:
        return len(self.tiles)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.tile_count

    def interior_tile_ids(self) -> tuple[int, ...]:
        """Tiles whose whole boundary is surrounded by patch tiles."""
        return tuple(t for t in range(len(self.tiles))
                     if all(self.vertices[v].complete
                            for v in self.tile_vertices[t]))

    def complete_vertex_ids(self) -> tuple[int, ...]:
        return tuple(v for v, rec in enumerate(self.vertices) if rec.complete)

    @classmethod
    def from_polygons(cls, polygons: Iterable, r: float | None = None,
                      center=None, zones: Sequence[str] | None = None,
                      snap_eps: float | None = None) -> "Patch":
        """Arrangement of raw polygons; convenience for hand-built patches."""
        from .tiling import Isometry

        polys = [np.asarray(p, dtype=float) for p in polygons]
        zones = zones or [""] * len(polys)
        tiles = [PlacedTile(iso=Isometry.identity(), cell=(0, 0),
                            polygon=p, zone=z) for p, z in zip(polys, zones)]
        return cls.from_tiles(tiles, r=r, center=center, snap_eps=snap_eps)

    @classmethod
    def from_tiles(cls, tiles: Sequence[PlacedTile], r: float | None = None,
                   center=None, snap_eps: float | None = None) -> "Patch":
        tiles = tuple(tiles)
        polys = [np.asarray(t.polygon, dtype=float) for t in tiles]
        if not polys:
            return cls(tiles=(), vertices=(), edges=(), corner_vertices=(),
                       tile_vertices=(), adjacents=(), neighbors=(),
                       r=r, center=center)
        side_lengths = np.concatenate(
            [np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)
             for p in polys])
        eps = (snap_eps if snap_eps is not None
               else SNAP_FACTOR * float(side_lengths.mean()))

        corner_vid, vertex_xy = _snap_corners(polys, eps)
        angles = [interior_angles(p) for p in polys]

        # vertices sitting inside a side split it; the tile counts as
        # incident there and contributes a straight angle
        on_side, interior_hits = _side_interior_incidence(
            polys, corner_vid, vertex_xy, eps)

        tile_sets = [set() for _ in vertex_xy]
        angle_sum = [0.0] * len(vertex_xy)
        pseudo = [False] * len(vertex_xy)
        for t, vids in enumerate(corner_vid):
            for k, vid in enumerate(vids):
                tile_sets[vid].add(t)
                angle_sum[vid] += angles[t][k]
        for vid, t in interior_hits:
            tile_sets[vid].add(t)
            angle_sum[vid] += math.pi
            pseudo[vid] = True

        edge_map: dict[tuple[int, int], set[int]] = defaultdict(set)
        tile_edge_keys: list[set] = [set() for _ in tiles]
        for t, poly in enumerate(polys):
            nk = len(poly)
            for k in range(nk):
                va, vb = corner_vid[t][k], corner_vid[t][(k + 1) % nk]
                stops = ([(0.0, va)] + sorted(on_side.get((t, k), []))
                         + [(1.0, vb)])
                for (_, v1), (_, v2) in zip(stops, stops[1:]):
                    key = (v1, v2) if v1 < v2 else (v2, v1)
                    edge_map[key].add(t)
                    tile_edge_keys[t].add(key)

        vertices = tuple(
            PatchVertex(xy=(float(vertex_xy[vid][0]),
                            float(vertex_xy[vid][1])),
                        tiles=frozenset(tile_sets[vid]),
                        valence=len(tile_sets[vid]),
                        pseudo=pseudo[vid],
                        complete=bool(abs(angle_sum[vid] - 2 * math.pi)
                                      <= COMPLETE_ANGLE_TOL))
            for vid in range(len(vertex_xy)))
        edges = tuple(PatchEdge(vertices=key, tiles=frozenset(owners))
                      for key, owners in sorted(edge_map.items()))

        adjacents = []
        for t in range(len(tiles)):
            touching = set()
            for key in tile_edge_keys[t]:
                touching.update(edge_map[key])
            touching.discard(t)
            adjacents.append(frozenset(touching))
        tile_vertices = tuple(
            frozenset(vid for vid in range(len(vertex_xy))
                      if t in tile_sets[vid])
            for t in range(len(tiles)))
        neighbors = []
        for t in range(len(tiles)):
            shared = set()
            for vid in tile_vertices[t]:
                shared.update(tile_sets[vid])
            shared.discard(t)
            neighbors.append(frozenset(shared))

        return cls(tiles=tiles, vertices=vertices, edges=edges,
                   corner_vertices=tuple(tuple(v) for v in corner_vid),
                   tile_vertices=tile_vertices,
                   adjacents=tuple(adjacents), neighbors=tuple(neighbors),
                   r=r, center=tuple(center) if center is not None else None)

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "center": list(self.center) if self.center else None,
            "tiles": [{"cell": list(t.cell), "zone": t.zone,
                       "polygon": [[float(x), float(y)]
                                   for x, y in t.polygon]}
                      for t in self.tiles],
            "vertices": [{"xy": [v.xy[0], v.xy[1]], "valence": v.valence,
                          "pseudo": v.pseudo, "complete": v.complete}
                         for v in self.vertices],
            "edges": [{"vertices": list(e.vertices),
                       "tiles": sorted(e.tiles)} for e in self.edges],
        }


def _snap_corners(polys, eps):
    points = np.vstack(polys)
    n = len(points)
    uf = _UnionFind(n)
    h = max(eps, 1e-300)
    buckets: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i in range(n):
        bx = math.floor(points[i, 0] / h)
        by = math.floor(points[i, 1] / h)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in buckets.get((bx + dx, by + dy), ()):
                    if np.hypot(*(points[i] - points[j])) <= eps:
                        uf.union(i, j)
        buckets[(bx, by)].append(i)

    root_to_vid: dict[int, int] = {}
    members: list[list[int]] = []
    point_vid = [0] * n
    for i in range(n):
        root = uf.find(i)
        vid = root_to_vid.get(root)
        if vid is None:
            vid = len(members)
            root_to_vid[root] = vid
            members.append([])
        members[vid].append(i)
        point_vid[i] = vid
    vertex_xy = np.array([points[m].mean(axis=0) for m in members])

    corner_vid = []
    pos = 0
    for p in polys:
        corner_vid.append([point_vid[pos + k] for k in range(len(p))])
        pos += len(p)
    return corner_vid, vertex_xy


def _side_interior_incidence(polys, corner_vid, vertex_xy, eps):
    """Find vertices lying strictly inside a tile side.

    Returns per-side split params and the (vertex, tile) incidence pairs.
    """
    tree = cKDTree(vertex_xy)
    on_side: dict[tuple[int, int], list[tuple[float, int]]] = defaultdict(list)
    interior_hits: set[tuple[int, int]] = set()
    for t, poly in enumerate(polys):
        nk = len(poly)
        for k in range(nk):
            a, b = poly[k], poly[(k + 1) % nk]
            va, vb = corner_vid[t][k], corner_vid[t][(k + 1) % nk]
            seg = b - a
            half = np.linalg.norm(seg) / 2.0
            for vid in tree.query_ball_point((a + b) / 2.0, half + 2 * eps):
                if vid == va or vid == vb:
                    continue
                if point_segment_distance(vertex_xy[vid], a, b) <= eps:
                    param = float(np.dot(vertex_xy[vid] - a, seg)
                                  / np.dot(seg, seg))
                    on_side[(t, k)].append((param, vid))
                    interior_hits.add((vid, t))
    return on_side, interior_hits


def patch_from_json_dict(document: dict, snap_eps: float | None = None
                         ) -> Patch:
    """Rebuild a Patch from its JSON export.

    Placement isometries are not stored, so loaded tiles carry identity
    transforms; the arrangement is recomputed from the polygons.
    """
    from .errors import ParseError
    from .tiling import Isometry

    try:
        tiles = [PlacedTile(iso=Isometry.identity(),
                            cell=tuple(rec.get("cell", (0, 0))),
                            polygon=np.asarray(rec["polygon"], dtype=float),
                            zone=rec.get("zone", ""))
                 for rec in document["tiles"]]
        r = document.get("r")
        center = document.get("center")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad patch document: {exc}") from None
    return Patch.from_tiles(
        tiles, r=None if r is None else float(r),
        center=None if center is None else tuple(center),
        snap_eps=snap_eps)


@dataclass(frozen=True)
class AdjacencyInfo:
    """Adjacency (shared edge) and neighborhood (any shared boundary point),
    per tile index."""
    adjacents: tuple[frozenset[int], ...]
    neighbors: tuple[frozenset[int], ...]


def classify_adjacency(patch: Patch) -> AdjacencyInfo:
    """Adjacent tiles share an edge of positive length; neighbors share at
    least a point. Adjacent implies neighbor."""
    return AdjacencyInfo(adjacents=patch.adjacents, neighbors=patch.neighbors)


def detect_vertices(patch: Patch) -> tuple[PatchVertex, ...]:
    """All arrangement vertices with valence and the pseudo-vertex flag."""
    return patch.vertices

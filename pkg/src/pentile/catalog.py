"""The catalog of the 15 known convex pentagon tile families.

Each family ("Type") is a system of linear angle equations plus edge
equalities, shipped as a data file. Solving a system for concrete coordinates
is a small nonlinear least-squares problem because the closure condition
couples angles and edge lengths.
"""
from __future__ import annotations

import functools
import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import InfeasibleParams, NonConvergence, ParseError, UnknownType
from .pentagon import (
    ANGLE_SUM,
    CORNERS,
    EDGES,
    Pentagon,
    edge_directions,
    make_pentagon,
)

VARIABLES = CORNERS + EDGES
_VAR_INDEX = {name: i for i, name in enumerate(VARIABLES)}

TYPE_IDS = tuple(range(1, 16))

CONSTRAINT_TOL = 1e-9       # accepted residual for a solved instance
TARGET_RESIDUAL = 1e-12     # Newton aims lower than the acceptance bound
MAX_ITERATIONS = 100
CLASSIFY_TOL = 1e-6

_TERM = re.compile(r"^([+-]?)(\d+(?:\.\d+)?)?([A-Ea-e])?$")


def _parse_equation(text: str):
    """Linear equation over corner letters A..E and edge letters a..e.

    Returns (coeffs over the 10 variables, constant). Angle equations are
    written in degrees in data files; the constant is converted to radians
    here so every runtime quantity stays in radians.
    """
    if text.count("=") != 1:
        raise ParseError(f"equation needs exactly one '=': {text!r}")
    coeffs = np.zeros(10)
    constant = 0.0
    for side, sign in zip(text.split("="), (1.0, -1.0)):
        compact = side.replace(" ", "")
        if not compact:
            raise ParseError(f"empty side in equation {text!r}")
        for chunk in re.findall(r"[+-]?[^+-]+", compact):
            m = _TERM.match(chunk)
            if not m or (m.group(2) is None and m.group(3) is None):
                raise ParseError(f"bad term {chunk!r} in equation {text!r}")
            value = float(m.group(2)) if m.group(2) else 1.0
            if m.group(1) == "-":
                value = -value
            if m.group(3):
                coeffs[_VAR_INDEX[m.group(3)]] += sign * value
            else:
                constant -= sign * value
    touches_angles = bool(coeffs[:5].any())
    touches_edges = bool(coeffs[5:].any())
    if touches_angles and touches_edges:
        raise ParseError(f"equation mixes angles and edges: {text!r}")
    if not touches_angles and not touches_edges:
        raise ParseError(f"equation has no variables: {text!r}")
    if touches_angles:
        constant = math.radians(constant)
    return tuple(coeffs), constant


@dataclass(frozen=True)
class LinearEquation:
    text: str
    coeffs: tuple[float, ...]
    constant: float

    @classmethod
    def parse(cls, text: str) -> "LinearEquation":
        coeffs, constant = _parse_equation(text)
        return cls(text=text, coeffs=coeffs, constant=constant)

    @property
    def is_angle_equation(self) -> bool:
        return any(self.coeffs[:5])

    def residual(self, values: Sequence[float]) -> float:
        return float(np.dot(self.coeffs, values) - self.constant)


def _class_equations(edge_class: Sequence[str]):
    """An equality class {a,d,e} expands to the chain a=d, d=e."""
    for left, right in zip(edge_class, edge_class[1:]):
        yield LinearEquation.parse(f"{left} = {right}")


@dataclass(frozen=True)
class TypeSpec:
    """Constraint system of one Type: angle equations, edge equalities, dof."""

    id: int
    angle_eqs: tuple[LinearEquation, ...]
    edge_classes: tuple[tuple[str, ...], ...]
    edge_eqs: tuple[LinearEquation, ...]
    dof: int
    default_params: Mapping[str, float]
    note: str = ""

    @functools.cached_property
    def constraint_rows(self) -> tuple[LinearEquation, ...]:
        rows = list(self.angle_eqs)
        for cls in self.edge_classes:
            rows.extend(_class_equations(cls))
        rows.extend(self.edge_eqs)
        return tuple(rows)

    def residuals(self, pentagon: Pentagon) -> np.ndarray:
        x = np.concatenate([pentagon.angles, pentagon.edges])
        return np.array([eq.residual(x) for eq in self.constraint_rows])

    def satisfied_by(self, pentagon: Pentagon, tol: float = CLASSIFY_TOL) -> bool:
        """True when every constraint row holds, edge rows relative to scale."""
        x = np.concatenate([pentagon.angles, pentagon.edges])
        scale = pentagon.mean_edge()
        for eq in self.constraint_rows:
            bound = tol if eq.is_angle_equation else tol * scale
            if abs(eq.residual(x)) > bound:
                return False
        return True


@dataclass(frozen=True)
class RepresentativeInstance:
    type_id: int
    pentagon: Pentagon
    note: str


@functools.lru_cache(maxsize=1)
def _load_catalog() -> dict[int, TypeSpec]:
    path = resources.files("pentile.data").joinpath("type_specs.json")
    raw = json.loads(path.read_text())
    catalog = {}
    for entry in raw:
        params = {}
        for name, value in entry.get("default_params", {}).items():
            if name not in _VAR_INDEX:
                raise ParseError(f"unknown parameter {name!r} in type data")
            params[name] = math.radians(value) if name in CORNERS else float(value)
        spec = TypeSpec(
            id=int(entry["id"]),
            angle_eqs=tuple(LinearEquation.parse(t) for t in entry["angle_eqs"]),
            edge_classes=tuple(tuple(c) for c in entry.get("edge_classes", [])),
            edge_eqs=tuple(LinearEquation.parse(t) for t in entry.get("edge_eqs", [])),
            dof=int(entry["dof"]),
            default_params=params,
            note=entry.get("note", ""),
        )
        catalog[spec.id] = spec
    return catalog


def get_type_spec(type_id: int) -> TypeSpec:
    catalog = _load_catalog()
    try:
        return catalog[int(type_id)]
    except (KeyError, TypeError, ValueError):
        raise UnknownType(f"no Type {type_id!r}; known ids are 1..15") from None


# --- instance solving -------------------------------------------------------

_ANGLE_SUM_ROW = LinearEquation(
    text="A + B + C + D + E = 540",
    coeffs=(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    constant=ANGLE_SUM,
)
# mean edge length pinned to 1 so instances come out at a canonical scale
_SCALE_ROW = LinearEquation(
    text="mean edge = 1",
    coeffs=(0.0,) * 5 + (0.2,) * 5,
    constant=1.0,
)


def _pin_row(name: str, value: float) -> LinearEquation:
    coeffs = [0.0] * 10
    coeffs[_VAR_INDEX[name]] = 1.0
    return LinearEquation(text=f"{name} = {value:g}", coeffs=tuple(coeffs),
                          constant=float(value))


def _closure(x: np.ndarray) -> np.ndarray:
    return np.asarray(x[5:]) @ edge_directions(x[:5])


def _closure_jacobian(x: np.ndarray) -> np.ndarray:
    angles, edges = x[:5], x[5:]
    dirs = edge_directions(angles)
    normals = np.column_stack([-dirs[:, 1], dirs[:, 0]])
    jac = np.zeros((2, 10))
    # heading of edge k involves angles 1..k, with d(heading)/d(angle) = -1
    for j in range(1, 5):
        jac[:, j] = -(edges[j:, None] * normals[j:]).sum(axis=0)
    jac[:, 5:] = dirs.T
    return jac


def _system_rows(spec: TypeSpec, free_params: Mapping[str, float]):
    rows = [_ANGLE_SUM_ROW, *spec.constraint_rows, _SCALE_ROW]
    rows.extend(_pin_row(name, value) for name, value in sorted(free_params.items()))
    return rows


def _full_residual(rows, x):
    linear = np.array([eq.residual(x) for eq in rows])
    return np.concatenate([linear, _closure(x)])


def _initial_guess(rows, x_seed=None):
    """Stage the start point: angles from the linear angle rows, then edges.

    When the angle rows leave a one-parameter family (Types whose remaining
    angle is pinned only through closure), scan along the family for the
    smallest full residual instead of guessing.
    """
    matrix = np.array([eq.coeffs for eq in rows])
    rhs = np.array([eq.constant for eq in rows])
    angle_sel = matrix[:, 5:].any(axis=1) == False  # noqa: E712 (boolean mask)
    m_ang, b_ang = matrix[angle_sel][:, :5], rhs[angle_sel]
    anchor = np.full(5, ANGLE_SUM / 5.0)
    correction, *_ = np.linalg.lstsq(m_ang, b_ang - m_ang @ anchor, rcond=None)
    base = anchor + correction
    kernel = null_space(m_ang)
    if kernel.shape[1] == 1:
        ts = np.linspace(-2.5, 2.5, 101)
        candidates = [base + t * kernel[:, 0] for t in ts]
    else:
        candidates = [base]

    edge_sel = ~angle_sel
    best = None
    for ang in candidates:
        if np.any(ang < 0.02) or np.any(ang > math.pi - 0.02):
            continue
        ang = ang * (ANGLE_SUM / ang.sum())
        dirs = edge_directions(ang)
        m_edge = np.vstack([matrix[edge_sel][:, 5:], dirs.T])
        b_edge = np.concatenate([rhs[edge_sel], np.zeros(2)])
        lengths, *_ = np.linalg.lstsq(m_edge, b_edge, rcond=None)
        lengths = np.maximum(lengths, 0.05)
        x = np.concatenate([ang, lengths])
        score = np.max(np.abs(_full_residual(rows, x)))
        if best is None or score < best[0]:
            best = (score, x)
    if best is None:
        raise InfeasibleParams("no convex start point for the angle system")
    return best[1]


def solve_instance(spec: TypeSpec, free_params: Mapping[str, float]) -> Pentagon:
    """Solve one Type's constraint system for concrete pentagon coordinates.

    free_params assigns exactly spec.dof of the letters A..E (radians) and
    a..e (lengths); the remaining quantities follow from the Type equations,
    the closure condition, and the mean-edge-1 scale convention. Damped
    Gauss-Newton, damping 0.5 on residual increase, at most 100 iterations;
    the result must reach max residual 1e-9 or NonConvergence is raised.
    """
    unknown = set(free_params) - set(VARIABLES)
    if unknown:
        raise ParseError(f"unknown free parameters: {sorted(unknown)}")
    if len(free_params) != spec.dof:
        raise ParseError(
            f"Type {spec.id} needs exactly {spec.dof} free parameters, "
            f"got {len(free_params)}")
    for name, value in free_params.items():
        if name in CORNERS and not 0.0 < value < math.pi:
            raise InfeasibleParams(
                f"angle {name}={value:.6g} rad outside the convex range (0, pi)")
        if name in EDGES and value <= 0.0:
            raise InfeasibleParams(f"edge {name}={value:.6g} must be positive")

    rows = _system_rows(spec, free_params)
    x = _initial_guess(rows)
    residual = _full_residual(rows, x)
    norm = np.max(np.abs(residual))
    linear_jac = np.array([eq.coeffs for eq in rows])
    for _ in range(MAX_ITERATIONS):
        if norm < TARGET_RESIDUAL:
            break
        jac = np.vstack([linear_jac, _closure_jacobian(x)])
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        scale = 1.0
        while scale > 1e-6:
            trial = x + scale * step
            trial_residual = _full_residual(rows, trial)
            trial_norm = np.max(np.abs(trial_residual))
            if trial_norm < norm:
                break
            scale *= 0.5
        else:
            break
        x, residual, norm = trial, trial_residual, trial_norm
    if norm > CONSTRAINT_TOL:
        raise NonConvergence(
            f"constraint residual stuck at {norm:.3e} for Type {spec.id}; "
            "the free parameters may conflict with the Type equations")

    angles, edges = x[:5], x[5:]
    if np.any(edges <= 1e-9):
        raise InfeasibleParams(
            f"Type {spec.id} has no pentagon with these parameters "
            "(an edge length collapses to zero or below)")
    if np.any(angles <= 1e-9) or np.any(angles >= math.pi - 1e-9):
        raise InfeasibleParams(
            f"Type {spec.id} parameters force a non-convex corner")
    pentagon = make_pentagon(angles, edges)
    return pentagon.scaled(1.0 / pentagon.mean_edge())


@functools.lru_cache(maxsize=None)
def representative(type_id: int) -> RepresentativeInstance:
    """One concrete pentagon per Type, solved from stored default parameters."""
    spec = get_type_spec(type_id)
    pentagon = solve_instance(spec, dict(spec.default_params))
    if spec.dof == 0:
        note = "fixed by the Type equations up to scale"
    else:
        shown = ", ".join(f"{k}={math.degrees(v):g}" if k in CORNERS
                          else f"{k}={v:g}"
                          for k, v in sorted(spec.default_params.items()))
        note = f"solved with {shown}"
    return RepresentativeInstance(type_id=spec.id, pentagon=pentagon, note=note)


def classify(pentagon: Pentagon, tol: float = CLASSIFY_TOL) -> list[int]:
    """All Type ids whose full constraint system the pentagon satisfies.

    Families overlap, so the result may hold several ids; a pentagon that
    tiles in no known way gives an empty list. Every corner relabeling (five
    rotations, each with and without reflection) is tried, since Type
    membership is a property of the shape, not of the labeling.
    """
    labelings = [pentagon.relabeled(rotation=r, reflect=refl)
                 for refl in (False, True) for r in range(5)]
    hits = []
    for type_id in TYPE_IDS:
        spec = get_type_spec(type_id)
        if any(spec.satisfied_by(q, tol) for q in labelings):
            hits.append(type_id)
    return hits

"""Type catalog tests: constraint transcription, solving, classification.

Anchor values checked against closed forms computed independently in the
tests: the Type 14 angle C = arccos((3*sqrt(57)-17)/16) and the Type 15
edge ratio (sqrt(6)+sqrt(2))/2.
"""
import math
import random

import numpy as np
import numpy.testing as npt
import pytest

from pentile import (
    InfeasibleParams,
    ParseError,
    UnknownType,
    classify,
    get_type_spec,
    has_theorem1_property,
    make_pentagon,
    representative,
    satisfied_relations,
    solve_edges,
    solve_instance,
)
from pentile.catalog import TYPE_IDS, LinearEquation, TypeSpec

DEG = math.pi / 180.0

HOUSE = solve_edges([a * DEG for a in (60, 150, 90, 90, 150)],
                    {"a": 1.0, "b": 1.0, "c": 1.0})


class TestEquationParsing:
    def test_angle_equation(self):
        eq = LinearEquation.parse("2B + C = 360")
        assert eq.coeffs[:5] == (0, 2, 1, 0, 0)
        assert eq.constant == pytest.approx(2 * math.pi)
        assert eq.is_angle_equation

    def test_subtraction_and_edges(self):
        eq = LinearEquation.parse("d = 2a + c")
        assert eq.coeffs[5:] == (-2, 0, -1, 1, 0)
        assert eq.constant == 0.0
        assert not eq.is_angle_equation

    def test_mixed_rejected(self):
        with pytest.raises(ParseError):
            LinearEquation.parse("A = a")

    def test_malformed_rejected(self):
        for bad in ("A + B", "A = = 90", "2 + 2 = 4", "A % B = 90"):
            with pytest.raises(ParseError):
                LinearEquation.parse(bad)


class TestCatalogData:
    def test_fifteen_types(self):
        assert TYPE_IDS == tuple(range(1, 16))
        for tid in TYPE_IDS:
            assert get_type_spec(tid).id == tid

    def test_unknown_ids(self):
        for bad in (0, 16, -3, "x"):
            with pytest.raises(UnknownType):
                get_type_spec(bad)

    def test_dof_table(self):
        dofs = [get_type_spec(tid).dof for tid in TYPE_IDS]
        assert dofs == [5, 4, 1, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0]

    def test_type1_condition_is_consecutive_sum(self):
        spec = get_type_spec(1)
        assert [eq.text for eq in spec.angle_eqs] == ["A + B + C = 360"]
        assert spec.edge_classes == () and spec.edge_eqs == ()

    def test_angle_systems_admit_convex_solutions(self):
        # combined linear system of each Type is consistent with the 540 sum
        for tid in TYPE_IDS:
            p = representative(tid).pentagon
            assert all(0 < a < math.pi for a in p.angles)
            assert sum(p.angles) == pytest.approx(3 * math.pi, abs=1e-9)


class TestRepresentatives:
    def test_constraints_hold_to_1e9(self):
        for tid in TYPE_IDS:
            rep = representative(tid)
            assert rep.type_id == tid
            spec = get_type_spec(tid)
            resid = spec.residuals(rep.pentagon)
            assert np.max(np.abs(resid)) < 1e-9, f"Type {tid}: {resid}"
            assert rep.pentagon.mean_edge() == pytest.approx(1.0, abs=1e-9)

    def test_every_type_has_theorem1_property(self):
        for tid in TYPE_IDS:
            assert has_theorem1_property(representative(tid).pentagon), tid

    def test_classify_round_trip(self):
        for tid in TYPE_IDS:
            assert tid in classify(representative(tid).pentagon), tid

    def test_cached(self):
        assert representative(9) is representative(9)

    def test_type14_angle_c(self):
        exact = math.acos((3 * math.sqrt(57) - 17) / 16)
        p = representative(14).pentagon
        assert abs(p.angles[2] - exact) < 1e-9
        assert math.degrees(exact) == pytest.approx(69.32, abs=0.005)

    def test_type15_exact_shape(self):
        p = representative(15).pentagon
        npt.assert_allclose(p.angles_deg, (150, 60, 135, 105, 90), atol=1e-9)
        a, b, c, d, e = p.edges
        assert a == pytest.approx(2 * b, abs=1e-9)
        assert b == pytest.approx(d, abs=1e-9) and b == pytest.approx(e, abs=1e-9)
        assert c / b == pytest.approx((math.sqrt(6) + math.sqrt(2)) / 2, abs=1e-9)

    def test_notes_mention_parameters(self):
        assert "B=110" in representative(13).note
        assert "scale" in representative(15).note


class TestSolveInstance:
    def test_type1_house_parameters(self):
        spec = get_type_spec(1)
        p = solve_instance(spec, {"A": 150 * DEG, "B": 60 * DEG,
                                  "D": 90 * DEG, "a": 1.0, "b": 1.0})
        npt.assert_allclose(p.angles_deg, (150, 60, 150, 90, 90), atol=1e-9)
        npt.assert_allclose(p.edges, np.ones(5), atol=1e-9)
        # same shape as the house pentagon, relabeled
        assert sorted(np.round(p.angles_deg, 6)) == sorted(np.round(HOUSE.angles_deg, 6))

    def test_param_count_enforced(self):
        spec = get_type_spec(4)
        with pytest.raises(ParseError):
            solve_instance(spec, {"B": 1.8})
        with pytest.raises(ParseError):
            solve_instance(spec, {"B": 1.8, "D": 2.0, "a": 1.0})

    def test_unknown_param_name(self):
        with pytest.raises(ParseError):
            solve_instance(get_type_spec(3), {"F": 1.0})

    def test_reflex_pin_infeasible(self):
        spec = get_type_spec(1)
        params = {"A": 300 * DEG, "B": 60 * DEG, "D": 90 * DEG,
                  "a": 1.0, "b": 1.0}
        with pytest.raises(InfeasibleParams):
            solve_instance(spec, params)

    def test_conflicting_pin_does_not_converge(self):
        # B pinned outside the convex window of Type 9
        from pentile.errors import PentileError
        with pytest.raises(PentileError):
            solve_instance(get_type_spec(9), {"B": 150 * DEG})

    def test_row_order_invariance(self):
        spec = get_type_spec(11)
        shuffled = TypeSpec(
            id=spec.id,
            angle_eqs=tuple(reversed(spec.angle_eqs)),
            edge_classes=spec.edge_classes,
            edge_eqs=spec.edge_eqs,
            dof=spec.dof,
            default_params=spec.default_params,
        )
        a = solve_instance(spec, dict(spec.default_params))
        b = solve_instance(shuffled, dict(spec.default_params))
        npt.assert_allclose(a.angles, b.angles, atol=1e-9)
        npt.assert_allclose(a.edges, b.edges, atol=1e-9)

    def test_free_edge_pin_respected(self):
        p = solve_instance(get_type_spec(2),
                           {"A": 70 * DEG, "B": 120 * DEG, "C": 110 * DEG,
                            "b": 1.1})
        assert p.edges[1] == pytest.approx(1.1, abs=1e-9)
        assert p.edges[0] == pytest.approx(p.edges[3], abs=1e-9)


class TestClassify:
    def test_house_is_type1(self):
        assert 1 in classify(HOUSE)

    def test_regular_pentagon_matches_nothing(self):
        p = solve_edges([108 * DEG] * 5, {"a": 1, "b": 1, "c": 1})
        assert classify(p) == []

    def test_relabeling_invariant(self):
        rng = random.Random(4)
        for tid in TYPE_IDS:
            p = representative(tid).pentagon
            q = p.relabeled(rotation=rng.randrange(5), reflect=rng.random() < 0.5)
            assert tid in classify(q), tid

    def test_overlapping_membership(self):
        # a Type 1 instance built to satisfy B + D = 180 (with the matching
        # edge pair equal) belongs to Type 2 as well, under relabeling
        spec = get_type_spec(1)
        p = solve_instance(spec, {"A": 100 * DEG, "B": 120 * DEG,
                                  "D": 60 * DEG, "a": 1.0, "c": 1.0})
        hits = classify(p)
        assert 1 in hits and 2 in hits

    def test_tolerance_is_respected(self):
        p = representative(14).pentagon
        nudged = make_pentagon(
            (p.angles[0] + 3e-5, p.angles[1] - 3e-5, *p.angles[2:]),
            solve_edges((p.angles[0] + 3e-5, p.angles[1] - 3e-5, *p.angles[2:]),
                        {"a": p.edges[0], "b": p.edges[1], "c": p.edges[2]}).edges)
        assert 14 not in classify(nudged, tol=1e-7)
        assert 14 in classify(nudged, tol=1e-3)

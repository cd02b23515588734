"""Graph parsing strictness, distance math, and snapping."""

import json
import math

import pytest

from intermodal import (
    GraphFormatError,
    Mode,
    SnapError,
    parse_graph,
    serialize_graph,
    snap,
)
from intermodal.graph import EARTH_RADIUS_M, SNAP_RADIUS_M, haversine_m

from conftest import graph_doc


# -- distance oracle ----------------------------------------------------------
# Reference distances computed independently with the spherical law of
# cosines on the same radius; both formulas must agree at these scales.

LAW_OF_COSINES_CASES = [
    ((48.2, 16.35), (48.2, 16.37), 1482.300574980758),
    ((48.2, 16.35), (48.21, 16.35), 1111.9492604640566),
    ((48.2, 16.35), (48.21, 16.37), 1852.894284801909),
]


@pytest.mark.parametrize("p1, p2, expected", LAW_OF_COSINES_CASES)
def test_haversine_matches_law_of_cosines(p1, p2, expected):
    got = haversine_m(p1[0], p1[1], p2[0], p2[1])
    # the acos in the reference formula is ill-conditioned at short
    # range, so cross-formula agreement is held to 1e-7 relative
    assert got == pytest.approx(expected, rel=1e-7)


def test_haversine_zero_and_symmetry():
    assert haversine_m(48.2, 16.35, 48.2, 16.35) == 0.0
    d1 = haversine_m(48.2, 16.35, 48.21, 16.37)
    d2 = haversine_m(48.21, 16.37, 48.2, 16.35)
    assert d1 == pytest.approx(d2, rel=1e-12)


def test_haversine_antipodal_is_half_circumference():
    half = math.pi * EARTH_RADIUS_M
    assert haversine_m(0.0, 0.0, 0.0, 180.0) == pytest.approx(half, rel=1e-9)


# -- parsing: happy path ------------------------------------------------------


def test_parse_minimal_graph():
    g = parse_graph(graph_doc())
    assert [n.id for n in g.nodes] == ["a", "b"]
    assert len(g.edges) == 1
    assert g.edges[0].allowed == {Mode.WALK: 5.0}
    assert g.name == "unnamed"


def test_parse_full_graph_round_trip(demo_graph):
    text = serialize_graph(demo_graph)
    again = parse_graph(text)
    assert serialize_graph(again) == text
    assert again.meta == demo_graph.meta


def test_meta_and_bbox(demo_graph):
    meta = demo_graph.meta
    assert meta["name"] == "demo_city"
    assert meta["nodes"] == 15
    lo_lat, lo_lon, hi_lat, hi_lon = demo_graph.bbox
    assert lo_lat < hi_lat and lo_lon < hi_lon
    for n in demo_graph.nodes:
        assert lo_lat <= n.lat <= hi_lat
        assert lo_lon <= n.lon <= hi_lon


def test_travel_seconds_from_speed():
    g = parse_graph(graph_doc(edges=[
        {"from": "a", "to": "b", "length_m": 300.0, "allowed": {"walk": 5.0}},
    ]))
    idx = g.node_index["a"]
    to, secs, length = g.adj_walk[idx][0]
    # 300 m at 5 km/h: 300 / (5 / 3.6) = 216 s
    assert secs == pytest.approx(216.0, abs=1e-9)
    assert length == 300.0


# -- parsing: strictness ------------------------------------------------------


def test_unknown_top_level_key_rejected():
    bad = json.loads(graph_doc())
    bad["extras"] = []
    with pytest.raises(GraphFormatError, match="unknown key 'extras'"):
        parse_graph(json.dumps(bad))


def test_unknown_node_key_rejected():
    bad = json.loads(graph_doc())
    bad["nodes"][0]["elevation"] = 12
    with pytest.raises(GraphFormatError, match="unknown key 'elevation'"):
        parse_graph(json.dumps(bad))


def test_unknown_edge_key_rejected():
    bad = json.loads(graph_doc())
    bad["edges"][0]["oneway"] = True
    with pytest.raises(GraphFormatError, match="unknown key 'oneway'"):
        parse_graph(json.dumps(bad))


def test_first_unknown_key_reported_deterministically():
    bad = json.loads(graph_doc())
    bad["edges"][0]["zz_late"] = 1
    bad["edges"][0]["aa_early"] = 1
    with pytest.raises(GraphFormatError, match="unknown key 'aa_early'"):
        parse_graph(json.dumps(bad))


def test_missing_required_key_rejected():
    bad = json.loads(graph_doc())
    del bad["edges"][0]["length_m"]
    with pytest.raises(GraphFormatError, match="missing key 'length_m'"):
        parse_graph(json.dumps(bad))


def test_bool_is_not_a_number():
    bad = json.loads(graph_doc())
    bad["edges"][0]["length_m"] = True
    with pytest.raises(GraphFormatError, match="length_m"):
        parse_graph(json.dumps(bad))


def test_unknown_mode_rejected():
    with pytest.raises(GraphFormatError, match="mode"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "b", "length_m": 500.0, "allowed": {"hoverboard": 20.0}},
        ]))


def test_duplicate_node_id_rejected():
    with pytest.raises(GraphFormatError, match="duplicate node id"):
        parse_graph(graph_doc(nodes=[
            {"id": "a", "lat": 48.2, "lon": 16.35},
            {"id": "a", "lat": 48.3, "lon": 16.36},
        ]))


def test_edge_to_unknown_node_rejected():
    with pytest.raises(GraphFormatError, match="unknown endpoint"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "ghost", "length_m": 100.0, "allowed": {"walk": 5.0}},
        ]))


def test_self_loop_rejected():
    with pytest.raises(GraphFormatError, match="self-loop"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "a", "length_m": 100.0, "allowed": {"walk": 5.0}},
        ]))


@pytest.mark.parametrize("field, value", [
    ("length_m", 0.0),
    ("length_m", -10.0),
])
def test_non_positive_length_rejected(field, value):
    with pytest.raises(GraphFormatError, match="positive"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "b", field: value, "allowed": {"walk": 5.0}},
        ]))


def test_non_positive_speed_rejected():
    with pytest.raises(GraphFormatError, match="positive"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "b", "length_m": 100.0, "allowed": {"walk": 0.0}},
        ]))


def test_pt_edge_requires_line_and_line_requires_pt():
    # pt speed without a line reference
    with pytest.raises(GraphFormatError, match="transit_line"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "b", "length_m": 100.0, "allowed": {"pt": 30.0}},
        ]))
    # line reference without pt mode
    with pytest.raises(GraphFormatError, match="transit_line"):
        parse_graph(graph_doc(
            edges=[{"from": "a", "to": "b", "length_m": 100.0,
                    "allowed": {"walk": 5.0}, "transit_line": "L1"}],
            transit_lines=[{"id": "L1", "headway_s": 300.0}],
        ))


def test_pt_edge_must_be_pt_only():
    with pytest.raises(GraphFormatError, match="pt"):
        parse_graph(graph_doc(
            edges=[{"from": "a", "to": "b", "length_m": 100.0,
                    "allowed": {"pt": 30.0, "walk": 5.0}, "transit_line": "L1"}],
            transit_lines=[{"id": "L1", "headway_s": 300.0}],
        ))


def test_undefined_transit_line_rejected():
    with pytest.raises(GraphFormatError, match="unknown transit_line"):
        parse_graph(graph_doc(edges=[
            {"from": "a", "to": "b", "length_m": 100.0,
             "allowed": {"pt": 30.0}, "transit_line": "ghost"},
        ]))


def test_non_positive_headway_rejected():
    with pytest.raises(GraphFormatError, match="positive"):
        parse_graph(graph_doc(
            edges=[{"from": "a", "to": "b", "length_m": 100.0,
                    "allowed": {"pt": 30.0}, "transit_line": "L1"}],
            transit_lines=[{"id": "L1", "headway_s": 0.0}],
        ))


def test_parking_at_unknown_node_rejected():
    with pytest.raises(GraphFormatError, match="unknown node"):
        parse_graph(graph_doc(parking=[{"node": "ghost", "accepts": ["car"]}]))


def test_parking_unknown_kind_rejected():
    with pytest.raises(GraphFormatError, match="vehicle kind"):
        parse_graph(graph_doc(parking=[{"node": "a", "accepts": ["tank"]}]))


def test_top_level_must_be_object():
    with pytest.raises(GraphFormatError):
        parse_graph("[1, 2, 3]")
    with pytest.raises(GraphFormatError):
        parse_graph("not json at all")


# -- snapping ------------------------------------------------------------------


def test_snap_exact_hit():
    g = parse_graph(graph_doc())
    assert snap((48.200, 16.350), g) == "a"
    assert snap((48.205, 16.360), g) == "b"


def test_snap_nearest_wins():
    g = parse_graph(graph_doc())
    # nudged slightly toward b
    assert snap((48.2049, 16.3598), g) == "b"


def test_snap_tie_prefers_smaller_id():
    # co-located nodes (station entrances) tie exactly; id decides
    g = parse_graph(graph_doc(nodes=[
        {"id": "c", "lat": 48.2, "lon": 16.352},
        {"id": "b", "lat": 48.2, "lon": 16.352},
    ], edges=[
        {"from": "c", "to": "b", "length_m": 300.0, "allowed": {"walk": 5.0}},
    ]))
    assert snap((48.2, 16.3521), g) == "b"


def test_snap_beyond_radius_fails_with_distance():
    g = parse_graph(graph_doc())
    # ~600 m north of node a: 0.0053959 degrees of latitude
    with pytest.raises(SnapError) as err:
        snap((48.200 + 0.0053959, 16.350), g)
    assert err.value.distance_m > SNAP_RADIUS_M
    assert err.value.distance_m == pytest.approx(600.0, abs=1.0)


def test_snap_just_inside_radius_succeeds():
    g = parse_graph(graph_doc())
    # ~450 m north of node a
    deg = 450.0 / (EARTH_RADIUS_M * math.pi / 180.0)
    assert snap((48.200 + deg, 16.350), g) == "a"

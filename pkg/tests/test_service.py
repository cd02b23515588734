"""HTTP service: endpoints, validation mapping, overrides, canonical bodies."""

import json
from datetime import datetime, timezone

import pytest
from fastapi.testclient import TestClient

from intermodal import Mode, OwnedVehicle, RoutingRequest, VehicleKind, shortest_route
from intermodal.search import NEUTRAL_PROFILE
from intermodal.service import create_app
from intermodal.wire import canonical_json


@pytest.fixture(scope="module")
def client(demo_graph):
    return TestClient(create_app(demo_graph))


@pytest.fixture()
def demo_request(fixtures_dir):
    return json.loads((fixtures_dir / "demo_request.json").read_text())


@pytest.fixture()
def demo_motorhome_request(fixtures_dir):
    return json.loads((fixtures_dir / "demo_motorhome_request.json").read_text())


def fresh_client(demo_graph, **kwargs) -> TestClient:
    """Isolated app when a test mutates override state."""
    return TestClient(create_app(demo_graph, **kwargs))


# -- health and profiles -------------------------------------------------------


def test_health_reports_graph_shape(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("application/json")
    body = resp.json()
    assert body["nodes"] == 15
    assert body["edges"] == 48
    assert body["overrides"] == 0
    lat_min, lon_min, lat_max, lon_max = body["bbox"]
    assert lat_min < lat_max and lon_min < lon_max


def test_profiles_lists_the_default_family(client):
    body = client.get("/profiles").json()
    ids = [p["id"] for p in body["profiles"]]
    assert ids[0] == "neutral"
    assert len(ids) == len(set(ids)) == 5
    for p in body["profiles"]:
        assert set(p["multipliers"]) == {"walk", "bike", "car", "motorhome", "pt"}
        assert all(1.0 <= v <= 100.0 for v in p["multipliers"].values())


# -- routing -------------------------------------------------------------------


def test_route_returns_alternatives_and_geometry(client, demo_request):
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 200
    body = resp.json()
    assert body["origin_node"] == "w1"
    assert body["destination_node"] == "e2"
    alts = body["alternatives"]
    assert len(alts) >= 2
    first = alts[0]
    assert first["totals"]["duration_s"] == pytest.approx(593.5, abs=0.05)
    assert first["totals"]["profile_id"] == "neutral"
    assert [leg["mode"] for leg in first["legs"]] == ["car"]
    assert first["legs"][0]["vehicle_id"] == "car1"
    assert first["mode_changes"] == 0
    assert "car" in first["by_mode"]

    # geometry covers every node any leg touches
    for alt in alts:
        for leg in alt["legs"]:
            for node_id in leg["nodes"]:
                lat, lon = body["geometry"][node_id]
                assert 48.0 < lat < 49.0 and 16.0 < lon < 17.0


def test_route_body_is_canonical_json(client, demo_request):
    resp = client.post("/route", json=demo_request)
    assert resp.text == canonical_json(json.loads(resp.text))


def test_route_snaps_coordinates(client, demo_request):
    demo_request["origin"] = {"lat": 48.1981, "lon": 16.3302}  # a few metres off camp
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 200
    assert resp.json()["origin_node"] == "camp"


def test_route_snap_failure_names_the_field(client, demo_request):
    demo_request["destination"] = {"lat": 47.0, "lon": 15.0}  # far outside the city
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 422
    err = resp.json()["error"]
    assert err["kind"] == "snap_failed"
    assert err["where"] == "destination"
    assert err["distance_m"] > 500.0


def test_route_vehicle_snap_failure_is_indexed(client, demo_request):
    demo_request["vehicles"][1]["location"] = {"lat": 47.0, "lon": 15.0}
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 422
    assert resp.json()["error"]["where"] == "vehicles[1].location"


def test_route_unreachable_maps_to_422(client):
    resp = client.post("/route", json={
        "origin": {"node": "w1"},
        "destination": {"node": "e2"},
        "modes": ["pt"],  # no way to reach a stop on foot
    })
    assert resp.status_code == 422
    assert resp.json()["error"]["kind"] == "unreachable"


def test_route_unknown_field_is_a_field_error(client, demo_request):
    demo_request["turbo"] = True
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 400
    err = resp.json()["error"]
    assert err["kind"] == "invalid_request"
    assert any(f["loc"].endswith("turbo") for f in err["fields"])


def test_route_missing_required_field(client):
    resp = client.post("/route", json={"origin": {"node": "w1"}, "modes": ["walk"]})
    assert resp.status_code == 400
    assert any("destination" in f["loc"] for f in resp.json()["error"]["fields"])


def test_route_location_needs_node_xor_coordinates(client, demo_request):
    demo_request["origin"] = {"node": "w1", "lat": 48.2, "lon": 16.33}
    assert client.post("/route", json=demo_request).status_code == 400
    demo_request["origin"] = {"lat": 48.2}
    assert client.post("/route", json=demo_request).status_code == 400


def test_route_distance_objective_single_answer(client):
    resp = client.post("/route", json={
        "origin": {"node": "w1"},
        "destination": {"node": "c2"},
        "modes": ["walk", "pt"],
        "objective": "shortest_distance",
    })
    assert resp.status_code == 200
    alts = resp.json()["alternatives"]
    assert len(alts) == 1
    assert alts[0]["totals"]["profile_id"] == "distance"


def test_route_accepts_custom_profiles(client, demo_request):
    demo_request["profiles"] = [
        {"id": "neutral",
         "multipliers": {"walk": 1, "bike": 1, "car": 1, "motorhome": 1, "pt": 1}},
        {"id": "no_cars",
         "multipliers": {"walk": 1, "bike": 1, "car": 100, "motorhome": 100, "pt": 1}},
    ]
    body = client.post("/route", json=demo_request).json()
    profile_ids = {a["totals"]["profile_id"] for a in body["alternatives"]}
    assert profile_ids <= {"neutral", "no_cars"}
    sequences = {tuple(leg["mode"] for leg in a["legs"]) for a in body["alternatives"]}
    assert any("car" not in seq for seq in sequences)


def test_route_rejects_non_neutral_first_profile(client, demo_request):
    demo_request["profiles"] = [
        {"id": "harsh",
         "multipliers": {"walk": 9, "bike": 1, "car": 1, "motorhome": 1, "pt": 1}},
    ]
    resp = client.post("/route", json=demo_request)
    assert resp.status_code == 400
    assert "neutral" in resp.json()["error"]["detail"]


# -- motorhome -------------------------------------------------------------------


def test_motorhome_three_labeled_options(client, demo_motorhome_request):
    resp = client.post("/motorhome", json=demo_motorhome_request)
    assert resp.status_code == 200
    body = resp.json()
    labels = [o["label"] for o in body["options"]]
    assert labels == ["designated_motorhome", "car_parking_risk", "park_closest"]
    designated = body["options"][0]
    assert designated["parking_node"] == "r3"
    assert designated["risk_flag"] is False
    assert designated["totals"]["duration_s"] == pytest.approx(1256.3, abs=0.05)
    risky = body["options"][1]
    assert risky["risk_flag"] is True
    assert risky["parking_node"] == "c3"
    assert "camp" in body["geometry"]
    assert resp.text == canonical_json(json.loads(resp.text))


def test_motorhome_profile_override(client, demo_motorhome_request):
    demo_motorhome_request["profile"] = {
        "id": "pt_hater",
        "multipliers": {"walk": 1, "bike": 1, "car": 1, "motorhome": 1, "pt": 100},
    }
    body = client.post("/motorhome", json=demo_motorhome_request).json()
    designated = body["options"][0]
    assert all(leg["mode"] != "pt" for leg in designated["legs"])


def test_motorhome_requires_motorhome_vehicle(client, demo_motorhome_request):
    demo_motorhome_request["vehicles"] = [
        {"id": "c1", "kind": "car", "location": {"node": "camp"}},
    ]
    resp = client.post("/motorhome", json=demo_motorhome_request)
    assert resp.status_code == 400
    assert "exactly one" in resp.json()["error"]["detail"]


# -- overrides ----------------------------------------------------------------------


def route_duration(client, payload) -> float:
    body = client.post("/route", json=payload).json()
    return body["alternatives"][0]["totals"]["duration_s"]


def test_overrides_slow_down_matching_edges(demo_graph, demo_request):
    client = fresh_client(demo_graph)
    before = route_duration(client, demo_request)

    resp = client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5},
    ]})
    assert resp.status_code == 200
    assert resp.json() == {"overrides": 1}
    assert client.get("/health").json()["overrides"] == 1

    after = route_duration(client, demo_request)
    expected = shortest_route(
        demo_graph,
        RoutingRequest(
            origin="w1", destination="e2",
            allowed_modes={Mode.WALK, Mode.BIKE, Mode.CAR, Mode.PT},
            vehicles=(
                OwnedVehicle("bike1", VehicleKind.BIKE, "w1"),
                OwnedVehicle("car1", VehicleKind.CAR, "w1"),
            ),
        ),
        NEUTRAL_PROFILE,
        speed_factors={("r2", "r3", Mode.CAR): 0.5},
    ).total_duration_s
    # wire floats carry six decimals
    assert after == pytest.approx(expected, abs=5e-7)
    assert after > before


def test_put_overrides_replaces_the_whole_table(demo_graph):
    client = fresh_client(demo_graph)
    client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5},
        {"from": "r1", "to": "r2", "mode": "car", "factor": 0.5},
    ]})
    assert client.get("/health").json()["overrides"] == 2
    client.put("/overrides", json={"overrides": [
        {"from": "c1", "to": "c2", "mode": "walk", "factor": 0.8},
    ]})
    assert client.get("/health").json()["overrides"] == 1
    client.put("/overrides", json={"overrides": []})
    assert client.get("/health").json()["overrides"] == 0


def test_override_validation(demo_graph):
    client = fresh_client(demo_graph)
    unknown = client.put("/overrides", json={"overrides": [
        {"from": "nowhere", "to": "r3", "mode": "car", "factor": 0.5},
    ]})
    assert unknown.status_code == 400
    assert "nowhere" in unknown.json()["error"]["detail"]

    for bad_factor in (0.0, -1.0, 10.5):
        resp = client.put("/overrides", json={"overrides": [
            {"from": "r2", "to": "r3", "mode": "car", "factor": bad_factor},
        ]})
        assert resp.status_code == 400

    bad_expiry = client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5,
         "expires_at": "not-a-time"},
    ]})
    assert bad_expiry.status_code == 400


def test_expired_overrides_are_ignored(demo_graph, demo_request):
    frozen = datetime(2026, 8, 17, 12, 0, 0, tzinfo=timezone.utc)
    client = fresh_client(demo_graph, clock=lambda: frozen)
    baseline = route_duration(client, demo_request)

    client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5,
         "expires_at": "2026-08-17T11:59:59Z"},
    ]})
    assert route_duration(client, demo_request) == baseline  # already expired

    client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5,
         "expires_at": "2026-08-17T12:00:01Z"},
    ]})
    assert route_duration(client, demo_request) > baseline  # still live


def test_naive_expiry_is_read_as_utc(demo_graph, demo_request):
    frozen = datetime(2026, 8, 17, 12, 0, 0, tzinfo=timezone.utc)
    client = fresh_client(demo_graph, clock=lambda: frozen)
    baseline = route_duration(client, demo_request)
    client.put("/overrides", json={"overrides": [
        {"from": "r2", "to": "r3", "mode": "car", "factor": 0.5,
         "expires_at": "2026-08-17T11:00:00"},  # no zone given
    ]})
    assert route_duration(client, demo_request) == baseline

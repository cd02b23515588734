import json
from pathlib import Path

import pytest

from intermodal import parse_graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def demo_graph():
    return parse_graph((FIXTURES / "demo_graph.json").read_text())


@pytest.fixture(scope="session")
def walk_vs_bike_graph():
    return parse_graph((FIXTURES / "walk_vs_bike_graph.json").read_text())


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def graph_doc(**parts) -> str:
    """Minimal valid graph document with overridable sections."""
    doc = {
        "nodes": [
            {"id": "a", "lat": 48.200, "lon": 16.350},
            {"id": "b", "lat": 48.205, "lon": 16.360},
        ],
        "edges": [
            {"from": "a", "to": "b", "length_m": 500.0, "allowed": {"walk": 5.0}},
        ],
    }
    doc.update(parts)
    return json.dumps(doc)

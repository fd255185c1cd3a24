"""Bundled example networks with their expected marginals.

Each fixture ships as a network document (readable by ``parse_network``)
extended with provenance metadata the parser ignores:

  * ``expected_marginals`` - per-node reference marginal vectors
  * ``transcription_status`` - ``"complete"`` when every CPT cell is a real
    transcription, ``"figure-dependent"`` when some rows are placeholders
    awaiting transcription from the original source material; acceptance
    checks that depend on real conditionals skip such fixtures

Expected marginals are compared against exact inference at ``MARGINAL_TOL``,
which absorbs the rounding of the published reference values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from .network import BayesianNetwork, parse_network

FIXTURE_IDS = ("bn3", "oil4", "liquidity10", "bankruptcy9", "bankruptcy_b_ch")
MARGINAL_TOL = 2e-3


@dataclass(frozen=True)
class Fixture:
    id: str
    network: BayesianNetwork
    expected_marginals: dict[str, tuple[float, ...]]
    transcription_status: str
    provenance: str

    @property
    def complete(self) -> bool:
        return self.transcription_status == "complete"


def fixture_path(fixture_id: str) -> Path:
    """Filesystem path of a bundled fixture document."""
    if fixture_id not in FIXTURE_IDS:
        raise KeyError(f"unknown fixture {fixture_id!r}; available: {', '.join(FIXTURE_IDS)}")
    return Path(str(files("qbnc").joinpath("fixtures", f"{fixture_id}.json")))


def load_fixture(fixture_id: str) -> Fixture:
    """Load and validate a bundled fixture."""
    path = fixture_path(fixture_id)
    text = path.read_text()
    network = parse_network(text)
    doc = json.loads(text)
    expected = {
        entry["node"]: tuple(float(x) for x in entry["p"])
        for entry in doc.get("expected_marginals", [])
    }
    return Fixture(
        id=fixture_id,
        network=network,
        expected_marginals=expected,
        transcription_status=doc.get("transcription_status", "complete"),
        provenance=doc.get("provenance", ""),
    )

import json
from importlib import resources
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
DEMOS = ROOT / "demos"


@pytest.fixture(scope="session")
def demos() -> Path:
    return DEMOS


@pytest.fixture(scope="session")
def report_schema() -> dict:
    return json.loads(resources.files("paramfeas").joinpath("report.schema.json").read_text())

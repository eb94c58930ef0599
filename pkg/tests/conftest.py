import json
from pathlib import Path

import pytest

CORPUS_DIR = Path(__file__).parent / "corpus"
SUITE_DIR = Path(__file__).parent / "data" / "test_suite"


class Fixture:
    def __init__(self, path: Path):
        self.name = path.name
        self.path = path
        self.schema_json = json.loads((path / "schema.json").read_text())
        self.valid = [
            json.loads(p.read_text()) for p in sorted((path / "valid").glob("*.json"))
        ]
        self.invalid = [
            json.loads(p.read_text()) for p in sorted((path / "invalid").glob("*.json"))
        ]

    @property
    def adversarial(self) -> bool:
        return self.name.startswith("adv_")

    def __repr__(self):
        return f"Fixture({self.name})"


def load_corpus() -> list[Fixture]:
    return [Fixture(p) for p in sorted(CORPUS_DIR.iterdir()) if p.is_dir()]


def load_suite() -> list[tuple[str, dict]]:
    """(file stem, group) pairs in the official suite format."""
    out = []
    for path in sorted(SUITE_DIR.glob("*.json")):
        for group in json.loads(path.read_text()):
            out.append((path.stem, group))
    return out


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()

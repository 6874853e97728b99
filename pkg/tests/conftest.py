import json
import sys
from pathlib import Path

import pytest

from qassess import data_path, load_demo_model
from qassess.assessment import read_bundle
from qassess.modelformat import load_modules

TESTS = Path(__file__).parent


@pytest.fixture(scope="session")
def demo_dir():
    return data_path("demo")


@pytest.fixture(scope="session")
def demo_modules(demo_dir):
    return load_modules([demo_dir])


@pytest.fixture(scope="session")
def demo_model():
    return load_demo_model()


@pytest.fixture(scope="session")
def demo_raw(demo_dir):
    """The demo module files as plain JSON, for oracles that bypass the library."""
    return [json.loads(p.read_text()) for p in sorted(Path(demo_dir).glob("*.qm.json"))]


@pytest.fixture(scope="session")
def reference_bundle():
    return read_bundle(data_path("bundles", "java6-reference.json"))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

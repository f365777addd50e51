import os
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

DATA = HERE / "data"
SOLVER_SCRIPT = HERE / "tools" / "pysat_solver.py"


def solver_template() -> str | None:
    """External DIMACS solver: $PCD_SAT_SOLVER, else the pysat wrapper if pysat is importable."""
    env = os.environ.get("PCD_SAT_SOLVER")
    if env:
        return env
    try:
        import pysat  # noqa: F401
    except ImportError:
        return None
    return f"{sys.executable} {SOLVER_SCRIPT} {{cnf}}"


@pytest.fixture
def solver():
    cmd = solver_template()
    if cmd is None:
        pytest.skip("no CNF solver available")
    return cmd


@pytest.fixture
def data_dir():
    return DATA

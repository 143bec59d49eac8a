import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from qcpipe.constants import angstrom_to_bohr  # noqa: E402
from qcpipe.molecule import diatomic, hydrogen_chain  # noqa: E402
from qcpipe.pipeline import build_problem  # noqa: E402

settings.register_profile("default", max_examples=50, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def h2():
    return build_problem(diatomic(1, 1, 1.4), "sto-3g")


@pytest.fixture(scope="session")
def h2_631g():
    return build_problem(diatomic(1, 1, 1.4), "6-31g")


@pytest.fixture(scope="session")
def heh():
    return build_problem(diatomic(2, 1, 1.4632, charge=1), "sto-3g")


@pytest.fixture(scope="session")
def h4():
    return build_problem(hydrogen_chain(4, angstrom_to_bohr(0.9)), "sto-3g")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def h2_fci(h2):
    from qcpipe.fci import full_ci

    return full_ci(h2.hamiltonian, h2.n_modes, h2.n_electrons)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])

import logging

import pytest


@pytest.fixture(autouse=True)
def _quiet_degeneracy_warnings(caplog):
    # the deep-coupling sweeps legitimately hit degenerate ground pairs at
    # nearly every point; keep the tie-break warnings out of the test output
    logging.getLogger("dicke3.diagnostics").setLevel(logging.ERROR)
    yield

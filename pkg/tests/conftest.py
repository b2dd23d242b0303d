from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from rzsynth.rings import DOmega, DRoot2, ZOmega, ZRoot2  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

small = st.integers(min_value=-60, max_value=60)
big = st.integers(min_value=-(10**30), max_value=10**30)

zroot2s = st.builds(ZRoot2, small, small)
nonzero_zroot2s = zroot2s.filter(bool)
zomegas = st.builds(ZOmega, small, small, small, small)
nonzero_zomegas = zomegas.filter(bool)
big_zomegas = st.builds(ZOmega, big, big, big, big)
droot2s = st.builds(DRoot2, zroot2s, st.integers(min_value=0, max_value=12))
domegas = st.builds(DOmega, zomegas, st.integers(min_value=0, max_value=12))

# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

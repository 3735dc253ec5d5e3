import pytest
from hypothesis import strategies as st

from rtprepair.header import RtpHeader

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


headers = st.builds(
    RtpHeader,
    version=st.integers(0, 3),
    padding=st.booleans(),
    extension=st.booleans(),
    csrc_count=st.integers(0, 15),
    marker=st.booleans(),
    payload_type=st.integers(0, 127),
    sequence_number=st.integers(0, 0xFFFF),
    timestamp=st.integers(0, 0xFFFFFFFF),
    ssrc=st.integers(0, 0xFFFFFFFF),
)


@pytest.fixture
def voip_header():
    return RtpHeader(sequence_number=10, timestamp=1600, ssrc=0xDEADBEEF)

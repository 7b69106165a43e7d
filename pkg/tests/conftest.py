import numpy as np
import pytest

# First 29 events of a real station file (times in seconds, two-bit codes).
SAMPLE_TIMES = [
    2.1634050886170270e-006,
    8.0075823256314910e-006,
    1.2668053500635000e-005,
    4.9706368996378400e-005,
    5.2854269101605610e-005,
    9.7272343207776580e-005,
    1.2815431751139350e-004,
    1.3008972522198680e-004,
    1.4427547709393630e-004,
    1.5615472722963800e-004,
    2.0560825198241920e-004,
    2.1648761420145820e-004,
    2.1938141279290700e-004,
    2.8082761420145820e-004,
    2.9832825198241920e-004,
    3.1709738886421220e-004,
    3.2956761420145820e-004,
    3.3093472722963800e-004,
    3.4241627025778890e-004,
    3.5539167101916270e-004,
    3.6150337933573870e-004,
    3.6763245357770900e-004,
    3.8984212241744120e-004,
    4.3617738345535160e-004,
    4.4365097917360800e-004,
    4.5388049708441920e-004,
    4.9135137159675660e-004,
    4.9907703051256600e-004,
    5.2821928900505510e-004,
]
SAMPLE_CODES = [1, 1, 2, 2, 0, 2, 3, 0, 3, 0, 0, 3, 2, 3, 0, 0, 3, 2, 0, 1, 2, 2, 1, 3, 2, 1, 1, 2, 1]

SAMPLE_V_TEXT = "".join("%.16e\n" % t for t in SAMPLE_TIMES)
SAMPLE_C_TEXT = "".join("%d\n" % c for c in SAMPLE_CODES)


@pytest.fixture
def sample_station_texts():
    return SAMPLE_V_TEXT, SAMPLE_C_TEXT


@pytest.fixture
def rng():
    return np.random.default_rng(0xBE11)

"""Shared fixtures: the bundled XYZ case study and its published
reference values (9-digit decimals as printed in the source tables)."""

from __future__ import annotations

import pytest

from satmetric import xyz
from satmetric.instrument import SurveyInstrument

# Published per-item means (17 items, N = 81).
REFERENCE_EXPECTATION_MEANS = [
    4.395061728, 4.296296296, 4.074074074, 4.345679012, 4.234567901,
    4.185185185, 4.197530864, 4.086419753, 3.765432099, 3.839506173,
    3.432098765, 3.481481481, 3.530864198, 3.728395062, 3.432098765,
    4.172839506, 3.580246914,
]
REFERENCE_PERCEPTION_MEANS = [
    4.444444444, 4.320987654, 3.209876543, 3.222222222, 3.567901235,
    4.382716049, 3.086419753, 3.24691358, 3.469135802, 4.222222222,
    4.24691358, 2.962962963, 3.827160494, 2.790123457, 4.037037037,
    3.777777778, 3.864197531,
]
REFERENCE_GAPS = [
    0.049382716, 0.024691358, -0.864197531, -1.12345679, -0.666666667,
    0.197530864, -1.111111111, -0.839506173, -0.296296296, 0.382716049,
    0.814814815, -0.518518519, 0.296296296, -0.938271605, 0.604938272,
    -0.395061728, 0.283950617,
]
# dimension -> (unweighted Y_d, weighted W_d, mean importance I_d)
REFERENCE_DIMENSION_SCORES = {
    "reliability": (0.037037037, 1.470189702, 39.69512195),
    "responsiveness": (-0.884773663, -19.63765934, 22.19512195),
    "assurance": (-0.512345679, -8.622402891, 16.82926829),
    "empathy": (0.007407407, 0.093044264, 12.56097561),
    "tangibles": (0.164609053, 1.445347787, 8.780487805),
}
REFERENCE_WEIGHTED_SUM = -25.25148048
REFERENCE_UNWEIGHTED_MEAN = -0.237613169


@pytest.fixture(scope="session")
def xyz_instrument() -> SurveyInstrument:
    return xyz.xyz_instrument()


@pytest.fixture(scope="session")
def xyz_weights():
    return xyz.xyz_weights()


@pytest.fixture(scope="session")
def xyz_expect_desc():
    return xyz.expectation_descriptives()


@pytest.fixture(scope="session")
def xyz_perceive_desc():
    return xyz.perception_descriptives()

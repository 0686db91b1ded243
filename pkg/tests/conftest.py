"""Shared fixtures: the default swimmer and the two reference shape loops."""

import numpy as np
import pytest

from magswim import PhasedSine, RotatedEllipse, SwimmerParams


@pytest.fixture
def params():
    return SwimmerParams()


@pytest.fixture
def crossing_loop():
    """Shape loop of the translation gait; straddles theta1 = theta2."""
    return PhasedSine(0.35, -1.817, 0.0, 0.53, -0.7186, 0.0)


@pytest.fixture
def ellipse_loop():
    """Tilted ellipse safely away from the singular set."""
    return RotatedEllipse(0.5, 0.25, np.pi / 4,
                          (5 * np.pi / 4, 3 * np.pi / 4))

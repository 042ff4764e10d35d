import numpy as np
import pytest

from cvdkit import ImageBuffer


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


@pytest.fixture
def random_image(rng):
    return ImageBuffer(rng.integers(0, 256, size=(64, 96, 3), dtype=np.uint8))


def red_disc_on_gray(size=64, radius=18):
    """Red disc centered on a mid-gray ground."""
    data = np.empty((size, size, 3), dtype=np.uint8)
    data[:, :] = (128, 128, 128)
    yy, xx = np.mgrid[0:size, 0:size]
    c = (size - 1) / 2.0
    disc = (xx - c) ** 2 + (yy - c) ** 2 <= radius * radius
    data[disc] = (255, 0, 0)
    return ImageBuffer(data), disc

import numpy as np
import pytest

from cvdkit import ImageBuffer
from cvdkit.augment import AugmentConfig, BandImage, fuse_band, fuse_pentachromatic
from cvdkit.errors import ValidationError
from cvdkit.spectral import ConeClass


def band(cone, value, w=6, h=4):
    return BandImage(cone, np.full((h, w), value, dtype=np.uint8))


class TestBandImage:
    def test_default_peaks(self):
        assert band(ConeClass.UV, 0).peak_nm == 370.0
        assert band(ConeClass.IR, 0).peak_nm == 630.0

    def test_visible_cones_rejected(self):
        with pytest.raises(ValidationError):
            BandImage(ConeClass.L, np.zeros((2, 2), dtype=np.uint8))


class TestFuseBand:
    def test_disabled_is_identity(self, random_image):
        cfg = AugmentConfig(uv_enabled=False, mix=1.0)
        uv = band(ConeClass.UV, 255, random_image.width, random_image.height)
        assert fuse_band(random_image, uv, cfg) == random_image

    def test_zero_band_is_identity(self, random_image):
        cfg = AugmentConfig(uv_enabled=True, mix=1.0)
        uv = band(ConeClass.UV, 0, random_image.width, random_image.height)
        out = fuse_band(random_image, uv, cfg)
        assert np.abs(out.data.astype(int) - random_image.data.astype(int)).max() <= 1

    def test_zero_mix_is_identity(self, random_image):
        cfg = AugmentConfig(uv_enabled=True, mix=0.0)
        uv = band(ConeClass.UV, 255, random_image.width, random_image.height)
        out = fuse_band(random_image, uv, cfg)
        assert np.abs(out.data.astype(int) - random_image.data.astype(int)).max() <= 1

    def test_full_band_full_mix_is_tint(self, random_image):
        cfg = AugmentConfig(uv_enabled=True, mix=1.0)
        uv = band(ConeClass.UV, 255, random_image.width, random_image.height)
        out = fuse_band(random_image, uv, cfg)
        assert np.array_equal(out.data, np.broadcast_to(cfg.uv_display_color, out.data.shape))

    def test_output_between_endpoints(self, random_image, rng):
        cfg = AugmentConfig(ir_enabled=True, mix=0.7)
        ir = BandImage(ConeClass.IR, rng.integers(0, 256, (random_image.height, random_image.width),
                                                  dtype=np.uint8))
        out = fuse_band(random_image, ir, cfg)
        lo = np.minimum(random_image.data, np.asarray(cfg.ir_display_color, dtype=np.uint8))
        hi = np.maximum(random_image.data, np.asarray(cfg.ir_display_color, dtype=np.uint8))
        assert np.all(out.data.astype(int) >= lo.astype(int) - 1)
        assert np.all(out.data.astype(int) <= hi.astype(int) + 1)

    def test_dimension_mismatch(self, random_image):
        cfg = AugmentConfig(uv_enabled=True)
        with pytest.raises(ValidationError) as err:
            fuse_band(random_image, band(ConeClass.UV, 10, 3, 3), cfg)
        assert err.value.code == "dimension_mismatch"

    def test_mix_validated(self):
        with pytest.raises(ValidationError):
            AugmentConfig(mix=1.5)


class TestFusePentachromatic:
    def test_both_disabled_identity(self, random_image):
        cfg = AugmentConfig()
        uv = band(ConeClass.UV, 200, random_image.width, random_image.height)
        ir = band(ConeClass.IR, 200, random_image.width, random_image.height)
        assert fuse_pentachromatic(random_image, uv, ir, cfg) == random_image

    def test_uv_only_matches_single_fuse(self, random_image):
        cfg = AugmentConfig(uv_enabled=True, mix=0.8)
        uv = band(ConeClass.UV, 130, random_image.width, random_image.height)
        ir = band(ConeClass.IR, 255, random_image.width, random_image.height)
        assert fuse_pentachromatic(random_image, uv, ir, cfg) == fuse_band(random_image, uv, cfg)

    def test_ir_applied_second_saturates(self, random_image):
        cfg = AugmentConfig(uv_enabled=True, ir_enabled=True, mix=1.0)
        uv = band(ConeClass.UV, 255, random_image.width, random_image.height)
        ir = band(ConeClass.IR, 255, random_image.width, random_image.height)
        out = fuse_pentachromatic(random_image, uv, ir, cfg)
        assert np.array_equal(out.data, np.broadcast_to(cfg.ir_display_color, out.data.shape))

import numpy as np
import pytest

from conftest import red_disc_on_gray
from cvdkit import ImageBuffer
from cvdkit.color import rgb_to_hsv, rgb_to_hsv_image
from cvdkit.correct import (BlinkState, CorrectionRecipe, RecipeStep, apply_recipe,
                            blink_overlay, confusion_mask, desaturate_helper,
                            edge_enhance_confusable, luminance_equalize, passive_filter,
                            red_channel_grayscale)
from cvdkit.errors import RecipeStepError, ValidationError
from cvdkit.image import RegionMask
from cvdkit.simulate import Deficiency, DeficiencyProfile

PROTAN = DeficiencyProfile(Deficiency.PROTANOPIA)


class TestRedChannelGrayscale:
    def test_pure_red_becomes_white(self):
        assert red_channel_grayscale(ImageBuffer.new(1, 1, (255, 0, 0))).pixel(0, 0) == (255, 255, 255)

    def test_no_red_becomes_black(self):
        assert red_channel_grayscale(ImageBuffer.new(1, 1, (0, 200, 90))).pixel(0, 0) == (0, 0, 0)

    def test_idempotent(self, random_image):
        once = red_channel_grayscale(random_image)
        assert red_channel_grayscale(once) == once

    def test_dimensions(self, random_image):
        out = red_channel_grayscale(random_image)
        assert (out.width, out.height) == (random_image.width, random_image.height)


class TestDesaturate:
    def test_value_is_max_channel(self):
        assert desaturate_helper(ImageBuffer.new(1, 1, (100, 150, 200))).pixel(0, 0) == (200, 200, 200)

    def test_gray_unchanged(self):
        img = ImageBuffer.new(3, 3, (77, 77, 77))
        assert desaturate_helper(img) == img

    def test_red_becomes_white(self):
        assert desaturate_helper(ImageBuffer.new(1, 1, (255, 0, 0))).pixel(0, 0) == (255, 255, 255)

    def test_output_saturation_zero(self, random_image):
        out = desaturate_helper(random_image)
        _, s, _ = rgb_to_hsv_image(out.data)
        assert float(s.max()) == 0.0

    def test_idempotent(self, random_image):
        once = desaturate_helper(random_image)
        assert desaturate_helper(once) == once


class TestLuminanceEqualize:
    def test_gain_one_is_identity(self, random_image):
        assert luminance_equalize(random_image, PROTAN, gain=1.0) == random_image

    def test_gray_image_unchanged(self):
        img = ImageBuffer.new(8, 8, (120, 120, 120))
        assert luminance_equalize(img, PROTAN, gain=1.5) == img

    def test_confusable_pixels_brighten(self):
        img = ImageBuffer.new(4, 4, (180, 20, 20))
        before_v = rgb_to_hsv((180, 20, 20)).v
        out = luminance_equalize(img, PROTAN, gain=1.3)
        after_v = rgb_to_hsv(out.pixel(0, 0)).v
        assert after_v == pytest.approx(min(1.0, before_v * 1.3), abs=2 / 255)

    def test_unmasked_pixels_untouched(self):
        # dim red disc: headroom for the value gain, gray ground stays put
        img, disc = red_disc_on_gray()
        img.data[disc] = (180, 20, 20)
        out = luminance_equalize(img, PROTAN, gain=1.4)
        assert np.array_equal(out.data[~disc], img.data[~disc])
        assert not np.array_equal(out.data[disc], img.data[disc])

    @pytest.mark.parametrize("gain", [0.5, 3.01, -1.0])
    def test_gain_validated(self, gain, random_image):
        with pytest.raises(ValidationError) as err:
            luminance_equalize(random_image, PROTAN, gain=gain)
        assert err.value.code == "bad_gain"


class TestPassiveFilter:
    def test_full_transmission_is_identity(self, random_image):
        assert passive_filter(random_image, green_attenuation=1.0) == random_image

    def test_zero_kills_green(self):
        assert passive_filter(ImageBuffer.new(1, 1, (0, 255, 0)), 0.0).pixel(0, 0) == (0, 0, 0)

    def test_white_goes_pink(self):
        # frozen from decode -> scale green by 0.2 -> encode
        out = passive_filter(ImageBuffer.new(1, 1, (255, 255, 255)), 0.2).pixel(0, 0)
        assert out == (255, 124, 255)
        assert out.g < out.r and out.g < out.b

    def test_attenuation_validated(self, random_image):
        with pytest.raises(ValidationError):
            passive_filter(random_image, green_attenuation=1.2)


class TestConfusionMask:
    def test_gray_image_empty(self):
        img = ImageBuffer.new(6, 6, (99, 99, 99))
        assert confusion_mask(img, PROTAN).count() == 0

    def test_zero_severity_empty(self, random_image):
        prof = DeficiencyProfile(Deficiency.PROTANOMALY, 0.0)
        assert confusion_mask(random_image, prof).count() == 0

    def test_red_half_exactly(self):
        data = np.empty((4, 8, 3), dtype=np.uint8)
        data[:, :4] = (255, 0, 0)
        data[:, 4:] = (128, 128, 128)
        mask = confusion_mask(ImageBuffer(data), PROTAN, tau=10.0)
        assert np.array_equal(mask.bits[:, :4], np.ones((4, 4), dtype=bool))
        assert not mask.bits[:, 4:].any()

    def test_monotone_in_tau(self, random_image):
        m1 = confusion_mask(random_image, PROTAN, tau=5.0)
        m2 = confusion_mask(random_image, PROTAN, tau=15.0)
        assert not (m2.bits & ~m1.bits).any()

    def test_tau_validated(self, random_image):
        with pytest.raises(ValidationError):
            confusion_mask(random_image, PROTAN, tau=0.0)


class TestBlinkOverlay:
    def test_off_phase_identity(self, random_image):
        mask = RegionMask(np.ones((random_image.height, random_image.width), dtype=bool))
        state = BlinkState(period_ms=1000.0, t_ms=600.0)  # floor(1.2) odd
        assert blink_overlay(random_image, mask, state, (0, 0, 255)) == random_image

    def test_empty_mask_identity(self, random_image):
        mask = RegionMask.empty(random_image.width, random_image.height)
        state = BlinkState(period_ms=1000.0, t_ms=100.0)
        assert blink_overlay(random_image, mask, state, (0, 0, 255)) == random_image

    def test_full_mask_on_phase(self, random_image):
        mask = RegionMask(np.ones((random_image.height, random_image.width), dtype=bool))
        state = BlinkState(period_ms=1000.0, t_ms=0.0)
        out = blink_overlay(random_image, mask, state, (0, 0, 255))
        assert np.array_equal(out.data, np.broadcast_to((0, 0, 255), out.data.shape))

    def test_phase_boundaries(self):
        assert BlinkState(1000.0, 0.0).is_on()
        assert not BlinkState(1000.0, 500.0).is_on()
        assert BlinkState(1000.0, 1000.0).is_on()

    def test_dimension_mismatch(self, random_image):
        mask = RegionMask.empty(3, 3)
        with pytest.raises(ValidationError) as err:
            blink_overlay(random_image, mask, BlinkState(), (0, 0, 0))
        assert err.value.code == "dimension_mismatch"

    def test_period_validated(self):
        with pytest.raises(ValidationError):
            BlinkState(period_ms=0.0)


class TestEdgeEnhance:
    def test_uniform_image_identity(self):
        img = ImageBuffer.new(16, 16, (200, 40, 40))
        assert edge_enhance_confusable(img, PROTAN) == img

    def test_gray_shapes_identity(self):
        data = np.full((16, 16, 3), 100, dtype=np.uint8)
        data[4:9, 4:9] = 160
        img = ImageBuffer(data)
        assert edge_enhance_confusable(img, PROTAN) == img

    def test_red_disc_gets_ring(self):
        img, disc = red_disc_on_gray(size=64, radius=18)
        edge_color = (0, 0, 255)
        out = edge_enhance_confusable(img, PROTAN, edge_color=edge_color)
        painted = np.all(out.data == np.asarray(edge_color), axis=-1)
        assert painted.any()
        # ring sits within 3 px of the disc boundary; interior and far
        # exterior stay untouched
        yy, xx = np.mgrid[0:64, 0:64]
        c = (64 - 1) / 2.0
        dist = np.sqrt((xx - c) ** 2 + (yy - c) ** 2)
        assert np.all(np.abs(dist[painted] - 18.0) <= 3.0)
        far = np.abs(dist - 18.0) > 3.0
        assert np.array_equal(out.data[far], img.data[far])


class TestRecipes:
    def test_empty_recipe_identity(self, random_image):
        assert apply_recipe(random_image, CorrectionRecipe()) == random_image

    def test_single_step_equals_direct(self, random_image):
        recipe = CorrectionRecipe((RecipeStep("red_gray"),))
        assert apply_recipe(random_image, recipe) == red_channel_grayscale(random_image)

    def test_composition(self):
        img = ImageBuffer(np.array([[[10, 240, 60], [200, 100, 30]],
                                    [[0, 0, 255], [255, 255, 255]]], dtype=np.uint8))
        recipe = CorrectionRecipe((
            RecipeStep("passive_filter", {"green_attenuation": 0.2}),
            RecipeStep("desaturate"),
        ))
        expect = desaturate_helper(passive_filter(img, 0.2))
        assert apply_recipe(img, recipe) == expect

    def test_step_error_carries_index(self, random_image):
        recipe = CorrectionRecipe((RecipeStep("desaturate"),
                                   RecipeStep("luminance_equalize", {"gain": 9.0})))
        with pytest.raises(RecipeStepError) as err:
            apply_recipe(random_image, recipe, PROTAN)
        assert err.value.step_index == 1
        assert err.value.code == "bad_gain"

    def test_unknown_operator(self, random_image):
        with pytest.raises(RecipeStepError) as err:
            apply_recipe(random_image, CorrectionRecipe((RecipeStep("sharpen"),)))
        assert err.value.code == "unknown_operator"

    def test_unknown_param(self, random_image):
        recipe = CorrectionRecipe((RecipeStep("red_gray", {"amount": 2}),))
        with pytest.raises(RecipeStepError) as err:
            apply_recipe(random_image, recipe)
        assert err.value.code == "bad_param"

    def test_profile_required(self, random_image):
        recipe = CorrectionRecipe((RecipeStep("edge_enhance"),))
        with pytest.raises(RecipeStepError) as err:
            apply_recipe(random_image, recipe, prof=None)
        assert err.value.code == "profile_required"

    def test_blink_step_uses_t_ms(self, random_image):
        recipe = CorrectionRecipe((RecipeStep("blink", {"highlight": [255, 0, 255]}),))
        on = apply_recipe(random_image, recipe, PROTAN, t_ms=0.0)
        off = apply_recipe(random_image, recipe, PROTAN, t_ms=600.0)
        assert off == random_image
        assert on != random_image or confusion_mask(random_image, PROTAN).count() == 0

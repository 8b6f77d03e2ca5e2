import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robustness_envelope import image_space as isp
from robustness_envelope.errors import (
    CoordinateOutOfRange,
    LevelOutOfRange,
    MalformedInput,
    ShapeMismatch,
    SpaceTooLarge,
)

P211 = isp.SpaceParams(2, 1, 1)
P212 = isp.SpaceParams(2, 1, 2)


def img(params, *levels):
    return isp.ImageTensor(params, tuple(levels))


class TestSpaceParams:
    def test_dimension_and_totals(self):
        assert P211.dimension == 4
        assert P211.total_images == 16
        assert P212.total_images == 256
        assert isp.SpaceParams(1, 2, 2).total_images == 16

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            isp.SpaceParams(0, 1, 1)


class TestImageTensor:
    def test_level_validation(self):
        with pytest.raises(LevelOutOfRange):
            img(P211, 0, 0, 0, 2)
        with pytest.raises(ShapeMismatch):
            img(P211, 0, 0, 0)

    def test_rank_round_trip(self):
        for rank in range(16):
            assert isp.image_from_rank(P211, rank).space_rank() == rank


class TestValueOfLevel:
    def test_endpoints(self):
        assert isp.value_of_level(0, 3) == 0
        assert isp.value_of_level(7, 3) == 1
        assert isp.value_of_level(1, 1) == 1

    def test_exact_form(self):
        assert isp.value_of_level(3, 3, exact=True) == Fraction(3, 7)

    def test_out_of_range(self):
        with pytest.raises(LevelOutOfRange):
            isp.value_of_level(8, 3)


class TestNorms:
    def test_identical_images(self):
        a = img(P211, 0, 1, 0, 1)
        for p in (0, 1, 2, 3):
            assert isp.norm_distance(a, a, p) == 0

    def test_single_flip_binary(self):
        a = img(P211, 0, 0, 0, 0)
        b = img(P211, 0, 0, 0, 1)
        assert isp.norm_distance(a, b, 0) == 1
        assert isp.norm_distance(a, b, 1) == 1
        assert isp.norm_distance(a, b, 2) == 1.0

    def test_all_flipped_l1(self):
        a = img(P211, 0, 0, 0, 0)
        b = img(P211, 1, 1, 1, 1)
        assert isp.norm_distance(a, b, 1) == 4

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            isp.norm_distance(img(P211, 0, 0, 0, 0), img(P212, 0, 0, 0, 0), 1)

    def test_quantization_lower_bound(self):
        # ||a-b||_p^p >= ||a-b||_0 / (2^b-1)^p, exhaustively on (2,1,2)
        images = list(isp.enumerate_space(P212))
        for a in images[:32]:
            for b in images[::17]:
                for p in (1, 2):
                    power = isp.norm_pth_power(a, b, p)
                    count = isp.norm_distance(a, b, 0)
                    assert power >= Fraction(count, P212.max_level ** p)
                    assert power <= count  # each |delta| <= 1

    @given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
    @settings(max_examples=80, deadline=None)
    def test_triangle_inequality(self, ra, rb, rc):
        a = isp.image_from_rank(P212, ra)
        b = isp.image_from_rank(P212, rb)
        c = isp.image_from_rank(P212, rc)
        for p in (1, 2):
            ab = float(isp.norm_distance(a, b, p))
            bc = float(isp.norm_distance(b, c, p))
            ac = float(isp.norm_distance(a, c, p))
            assert ac <= ab + bc + 1e-12
        assert (isp.norm_distance(a, c, 0)
                <= isp.norm_distance(a, b, 0) + isp.norm_distance(b, c, 0))

    @given(st.integers(0, 255), st.integers(0, 255))
    @settings(max_examples=60, deadline=None)
    def test_l1_below_count(self, ra, rb):
        a = isp.image_from_rank(P212, ra)
        b = isp.image_from_rank(P212, rb)
        assert isp.norm_distance(a, b, 1) <= isp.norm_distance(a, b, 0)


class TestEnumeration:
    def test_counts(self):
        assert len(list(isp.enumerate_space(isp.SpaceParams(1, 1, 1)))) == 2
        assert len(list(isp.enumerate_space(P211))) == 16
        assert len(list(isp.enumerate_space(P212))) == 256

    def test_unique_and_ordered(self):
        seen = [im.space_rank() for im in isp.enumerate_space(P211)]
        assert seen == list(range(16))

    def test_cap(self):
        with pytest.raises(SpaceTooLarge):
            list(isp.enumerate_space(P212, cap=100))


class TestSampling:
    def test_deterministic(self):
        a = isp.sample_uniform(P212, seed=42)
        b = isp.sample_uniform(P212, seed=42)
        assert a == b

    def test_index_streams_differ(self):
        a = isp.sample_uniform(P212, seed=42, index=0)
        b = isp.sample_uniform(P212, seed=42, index=1)
        assert a != b  # 1/256 chance of collision would be a fixed fact

    def test_levels_uniform(self):
        params = isp.SpaceParams(1, 1, 1)
        rng = isp.philox_rng(9)
        draws = [isp.sample_uniform(params, 0, rng=rng).levels[0]
                 for _ in range(20000)]
        mean = float(np.mean(draws))
        assert abs(mean - 0.5) < 0.011  # ~3 sigma for 2e4 coin flips

    def test_histogram_flat_for_b2(self):
        params = isp.SpaceParams(1, 1, 2)
        rng = isp.philox_rng(11)
        draws = np.array([isp.sample_uniform(params, 0, rng=rng).levels[0]
                          for _ in range(20000)])
        counts = np.bincount(draws, minlength=4)
        # chi-square with 3 dof, 99% critical value 11.34
        expected = len(draws) / 4
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < 11.34


class TestSerialization:
    def test_round_trip_exhaustive(self):
        for image in isp.enumerate_space(P211):
            assert isp.decode_image(isp.encode_image(image)) == image

    @given(st.integers(1, 3), st.integers(1, 2), st.integers(1, 3),
           st.integers(0, 10 ** 12))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_random_spaces(self, n, h, b, rank_seed):
        params = isp.SpaceParams(n, h, b)
        image = isp.image_from_rank(params, rank_seed % params.total_images)
        encoded = isp.encode_image(image)
        assert isp.decode_image(encoded) == image
        assert isp.encode_image(isp.decode_image(encoded)) == encoded

    def test_rejects_overflow_level(self):
        payload = {"n": 2, "h": 1, "b": 1, "levels": [0, 0, 0, 2]}
        with pytest.raises(MalformedInput) as err:
            isp.decode_image(json.dumps(payload))
        assert err.value.position == 3

    def test_rejects_wrong_length(self):
        payload = {"n": 2, "h": 1, "b": 1, "levels": [0, 0, 0]}
        with pytest.raises(MalformedInput):
            isp.decode_image(json.dumps(payload))

    def test_rejects_float_levels(self):
        payload = '{"n": 2, "h": 1, "b": 1, "levels": [0, 0.0, 0, 0]}'
        with pytest.raises(MalformedInput):
            isp.decode_image(payload)

    def test_rejects_bad_json(self):
        with pytest.raises(MalformedInput):
            isp.decode_image(b"{nope")


class TestCells:
    def test_binary_cells(self):
        one = isp.SpaceParams(1, 1, 1)
        assert isp.cell_of_point(one, [0.3]).levels == (0,)
        assert isp.cell_of_point(one, [0.5]).levels == (1,)
        assert isp.cell_of_point(one, [1.0]).levels == (1,)

    def test_flatten_lands_in_own_cell(self):
        for image in isp.enumerate_space(P212):
            assert isp.cell_of_point(P212, isp.flatten(image)) == image

    def test_out_of_range(self):
        with pytest.raises(CoordinateOutOfRange):
            isp.cell_of_point(isp.SpaceParams(1, 1, 1), [1.5])

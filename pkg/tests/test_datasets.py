"""Dataset generation, encoding conventions, splits, and span structure."""

import itertools

import numpy as np
import pytest

from qaekit.datasets import (
    PixelImage,
    bars_and_stripes_2x4,
    dataset_to_json,
    decode,
    encode,
    framed_4x4_dataset,
    make_split,
)

# Golden 4x4 superposition (frame white, centers black/black/white/black):
# signs read left to right, top to bottom.
GOLDEN_4X4_PIXELS = (1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 1, 1, 1, 1)
GOLDEN_4X4_SIGNS = (-1, -1, -1, -1, -1, 1, 1, -1, -1, -1, 1, -1, -1, -1, -1, -1)

# Golden 2x4 stripe state with alternating columns; amplitudes +-0.35355.
GOLDEN_2X4_PIXELS = (0, 1, 0, 1, 0, 1, 0, 1)
GOLDEN_2X4_SIGNS = (1, -1, 1, -1, 1, -1, 1, -1)


class TestFramedDataset:
    def test_exactly_32_distinct_images(self):
        imgs = framed_4x4_dataset()
        assert len(imgs) == 32
        assert len({i.pixels for i in imgs}) == 32

    def test_index_zero_is_all_black(self):
        assert set(framed_4x4_dataset()[0].pixels) == {0}

    def test_border_is_uniform(self):
        border = [(r, c) for r in range(4) for c in range(4) if r in (0, 3) or c in (0, 3)]
        assert len(border) == 12
        for img in framed_4x4_dataset():
            values = {img.pixel(r, c) for r, c in border}
            assert len(values) == 1

    def test_enumeration_is_frame_major_then_center_bits(self):
        imgs = framed_4x4_dataset()
        for idx, img in enumerate(imgs):
            frame, center = divmod(idx, 16), None
            assert img.pixel(0, 0) == idx // 16
            center_bits = sum(img.pixels[pos] << j for j, pos in enumerate((5, 6, 9, 10)))
            assert center_bits == idx % 16


class TestBarsAndStripes:
    def test_brute_force_count(self):
        # Oracle: enumerate all 256 images, keep bars (uniform rows) or
        # stripes (uniform columns).
        def is_bar(p):
            return all(len({p[r * 4 + c] for c in range(4)}) == 1 for r in range(2))

        def is_stripe(p):
            return all(len({p[r * 4 + c] for r in range(2)}) == 1 for c in range(4))

        brute = {p for p in itertools.product((0, 1), repeat=8) if is_bar(p) or is_stripe(p)}
        got = {i.pixels for i in bars_and_stripes_2x4()}
        assert got == brute
        assert len(got) == 18

    def test_uniform_images_are_both(self):
        imgs = {i.pixels for i in bars_and_stripes_2x4()}
        assert (0,) * 8 in imgs and (1,) * 8 in imgs


class TestEncode:
    def test_all_black_4x4(self):
        enc = encode(framed_4x4_dataset()[0])
        assert np.allclose(enc.state.amplitudes, np.full(16, 0.25))

    def test_golden_4x4_state(self):
        img = PixelImage(4, 4, GOLDEN_4X4_PIXELS)
        assert img.pixels in {i.pixels for i in framed_4x4_dataset()}
        enc = encode(img)
        assert np.allclose(enc.state.amplitudes.real, np.array(GOLDEN_4X4_SIGNS) * 0.25)
        assert np.allclose(enc.state.amplitudes.imag, 0.0)

    def test_golden_2x4_state(self):
        img = PixelImage(4, 2, GOLDEN_2X4_PIXELS)
        assert img.pixels in {i.pixels for i in bars_and_stripes_2x4()}
        enc = encode(img)
        assert np.allclose(
            enc.state.amplitudes.real, np.array(GOLDEN_2X4_SIGNS) / np.sqrt(8), atol=1e-12
        )
        assert abs(abs(enc.state.amplitudes[0]) - 0.35355) < 5e-6

    def test_states_real_normalized_uniform_magnitude(self):
        for img in framed_4x4_dataset() + bars_and_stripes_2x4():
            s = encode(img).state
            assert s.norm_error() < 1e-12
            assert np.allclose(np.abs(s.amplitudes), 1 / np.sqrt(s.dim), atol=1e-12)
            assert np.allclose(s.amplitudes.imag, 0.0)

    def test_round_trip_exact(self):
        for img in framed_4x4_dataset() + bars_and_stripes_2x4():
            assert decode(encode(img)).pixels == img.pixels

    def test_injective_with_overlap_gap(self):
        # k flipped pixels give inner product 1 - k/8, so distinct images
        # always have <a|b> < 1; magnitudes stay <= 1 - 1/8 except for the
        # antipodal all-black/all-white pair, whose states differ by a
        # global sign (inner product exactly -1).
        imgs = framed_4x4_dataset()
        encs = [encode(i).state.amplitudes for i in imgs]
        for a, b in itertools.combinations(range(32), 2):
            inner = np.vdot(encs[a], encs[b]).real
            assert inner < 1 - 1 / 8 + 1e-12
            antipodal = all(pa != pb for pa, pb in zip(imgs[a].pixels, imgs[b].pixels))
            if antipodal:
                assert inner == pytest.approx(-1.0, abs=1e-12)
            else:
                assert abs(inner) <= 1 - 1 / 8 + 1e-12

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            PixelImage(3, 2, (0,) * 6)


class TestSpanStructure:
    # The frame contributes one direction and each free center pixel one
    # more, so the framed set spans exactly 5 of 16 dimensions; bars and
    # stripes span 4 (stripes) + 1 (bars beyond the shared uniforms) = 5 of 8.
    @pytest.mark.parametrize(
        "images,span",
        [(framed_4x4_dataset(), 5), (bars_and_stripes_2x4(), 5)],
        ids=["framed32", "bas18"],
    )
    def test_gram_rank_equals_analytic_span(self, images, span):
        states = np.stack([encode(i).state.amplitudes for i in images])
        gram = states @ states.conj().T
        rank = int(np.sum(np.linalg.eigvalsh(gram) > 1e-10))
        assert rank == span


class TestMakeSplit:
    def test_framed_defaults(self):
        split = make_split(framed_4x4_dataset(), 14, 3, 7, seed=11)
        assert len(split.train) == 42
        assert len(split.test) == 18
        assert len(set(split.train_ids)) == 14
        assert set(split.train_ids) | set(split.test_ids) == set(range(32))

    def test_bars_defaults(self):
        split = make_split(bars_and_stripes_2x4(), 10, 2, 5, seed=7)
        assert len(split.train) == 20
        assert len(split.test) == 8

    def test_replication_one_is_permutation(self):
        imgs = framed_4x4_dataset()
        split = make_split(imgs, 8, 1, 4, seed=3)
        assert sorted(split.train_ids) == sorted(set(split.train_ids))

    def test_deterministic_given_seed(self):
        a = make_split(framed_4x4_dataset(), 14, 3, 7, seed=5)
        b = make_split(framed_4x4_dataset(), 14, 3, 7, seed=5)
        assert a.train_ids == b.train_ids
        assert a.test_ids == b.test_ids

    def test_explicit_train_ids_override(self):
        ids = list(range(10))
        split = make_split(bars_and_stripes_2x4(), 10, 2, 5, seed=0, train_ids=ids)
        assert sorted(set(split.train_ids)) == ids

    def test_batch_divisibility_enforced(self):
        with pytest.raises(ValueError):
            make_split(framed_4x4_dataset(), 14, 3, 8, seed=0)

    def test_json_export(self):
        doc = __import__("json").loads(dataset_to_json(bars_and_stripes_2x4()[:2]))
        assert doc[0]["pixels"] == [0] * 8
        assert len(doc[0]["amplitudes"]) == 8

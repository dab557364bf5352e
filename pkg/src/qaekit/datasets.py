"""Image datasets and their encoding as signed equal-superposition states.

Encoding convention: a width x height black/white image with a power-of-two
pixel count maps to a state on log2(width*height) qubits where

  * the basis index of the pixel at (row r, column c) is its row-major
    position r*width + c — equivalently, the low log2(width) index bits are
    the column (least significant bit first) and the remaining bits are the
    row, matching ket labels |(c1,c2),(r1,r2)> with c1, r1 least significant;
  * every amplitude is (-1)**pixel / sqrt(width*height): positive for black
    (0), negative for white (1), assigned left to right, top to bottom.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .core import StateVector


@dataclass(frozen=True)
class PixelImage:
    """Black/white image: 0 = black, 1 = white, row-major pixels."""

    width: int
    height: int
    pixels: tuple

    def __post_init__(self):
        object.__setattr__(self, "pixels", tuple(int(p) for p in self.pixels))
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"{self.width}x{self.height} image needs {self.width * self.height} "
                f"pixels, got {len(self.pixels)}"
            )
        count = self.width * self.height
        if count & (count - 1):
            raise ValueError(f"pixel count {count} is not a power of two")
        if any(p not in (0, 1) for p in self.pixels):
            raise ValueError("pixels must be 0 or 1")

    def pixel(self, row: int, col: int) -> int:
        return self.pixels[row * self.width + col]

    def rows(self) -> list:
        return [self.pixels[r * self.width : (r + 1) * self.width] for r in range(self.height)]


@dataclass(frozen=True)
class EncodedImage:
    image: PixelImage
    state: StateVector


@dataclass(frozen=True)
class DatasetSplit:
    """Augmented training set plus held-out test set, with provenance ids."""

    train: tuple  # EncodedImage, after replication + shuffle
    test: tuple
    train_ids: tuple  # index into the source image list, parallel to train
    test_ids: tuple
    batch_size: int
    seed: int

    def __post_init__(self):
        if not self.train:
            raise ValueError("training set must be non-empty")
        if len(self.train) % self.batch_size:
            raise ValueError(
                f"batch size {self.batch_size} does not divide "
                f"augmented train size {len(self.train)}"
            )

    def batches(self):
        for i in range(0, len(self.train), self.batch_size):
            yield self.train[i : i + self.batch_size]


def encode(image: PixelImage) -> EncodedImage:
    """Signed equal superposition; amplitude index = row-major pixel index."""
    count = image.width * image.height
    amps = np.array([(-1.0) ** p for p in image.pixels]) / np.sqrt(count)
    return EncodedImage(image, StateVector(count.bit_length() - 1, amps.astype(np.complex128)))


def decode(encoded: EncodedImage) -> PixelImage:
    """Recover the image by reading amplitude signs back off."""
    img = encoded.image
    pixels = tuple(int(a.real < 0) for a in encoded.state.amplitudes)
    return PixelImage(img.width, img.height, pixels)


_FRAME_POSITIONS = tuple(
    r * 4 + c for r in range(4) for c in range(4) if r in (0, 3) or c in (0, 3)
)
_CENTER_POSITIONS = (5, 6, 9, 10)


def framed_4x4_dataset() -> list:
    """All 4x4 images whose 12 border pixels share one value.

    Enumeration order: frame bit major, then the 4 central pixels read
    row-major as a little-endian 4-bit integer. Index 0 is the all-black
    image; there are exactly 32 images.
    """
    images = []
    for frame in (0, 1):
        for center in range(16):
            pixels = [frame] * 16
            for j, pos in enumerate(_CENTER_POSITIONS):
                pixels[pos] = (center >> j) & 1
            images.append(PixelImage(4, 4, tuple(pixels)))
    return images


def bars_and_stripes_2x4() -> list:
    """All 2x4 images that are horizontal bars (uniform rows) or vertical
    stripes (uniform columns); 18 distinct patterns, deterministic order."""
    seen = {}
    for r0, r1 in itertools.product((0, 1), repeat=2):  # bars: each row uniform
        seen.setdefault((r0,) * 4 + (r1,) * 4, None)
    for cols in itertools.product((0, 1), repeat=4):  # stripes: each column uniform
        seen.setdefault(cols + cols, None)
    return [PixelImage(4, 2, pixels) for pixels in seen.keys()]


def make_split(
    images: list,
    train_count: int,
    replication: int,
    batch_size: int,
    seed: int,
    train_ids: list | None = None,
) -> DatasetSplit:
    """Seeded train/test partition with duplication-and-shuffle augmentation.

    Training images are sampled without replacement (or taken from an
    explicit ``train_ids`` override), replicated ``replication`` times, and
    shuffled; everything else becomes the test set.
    """
    if train_count > len(images):
        raise ValueError(f"train_count {train_count} exceeds dataset size {len(images)}")
    if replication < 1:
        raise ValueError("replication must be >= 1")
    rng = np.random.default_rng(seed)
    if train_ids is None:
        train_ids = sorted(rng.choice(len(images), size=train_count, replace=False).tolist())
    else:
        train_ids = [int(i) for i in train_ids]
        if len(train_ids) != train_count:
            raise ValueError("explicit train_ids length must equal train_count")
        if len(set(train_ids)) != len(train_ids):
            raise ValueError("explicit train_ids must be distinct")
    test_ids = [i for i in range(len(images)) if i not in set(train_ids)]

    augmented = [(i, encode(images[i])) for i in train_ids] * replication
    order = rng.permutation(len(augmented))
    augmented = [augmented[k] for k in order]
    test = [(i, encode(images[i])) for i in test_ids]
    return DatasetSplit(
        train=tuple(e for _, e in augmented),
        test=tuple(e for _, e in test),
        train_ids=tuple(i for i, _ in augmented),
        test_ids=tuple(test_ids),
        batch_size=batch_size,
        seed=seed,
    )


def dataset_to_json(images: list) -> str:
    """Pixels plus encoded amplitudes, for the plotting pipeline."""
    rows = []
    for idx, img in enumerate(images):
        enc = encode(img)
        rows.append(
            {
                "id": idx,
                "width": img.width,
                "height": img.height,
                "pixels": list(img.pixels),
                "amplitudes": [float(a.real) for a in enc.state.amplitudes],
            }
        )
    return json.dumps(rows, indent=2)

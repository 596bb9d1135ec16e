"""Corpus preparation: normalization, mirror augmentation, synthetic corpus.

A corpus on disk is a directory of PNG files plus a manifest.txt listing
filenames in order, one per line.
"""

from __future__ import annotations

import os

import numpy as np

from .decoder import decode
from .images import hflip, load_png, pad_square, resize_bilinear, save_png, to_grayscale

MANIFEST_NAME = "manifest.txt"


def normalize_image(raw, target: int = 512) -> np.ndarray:
    """Standardize a raster to white-strokes-on-black at target x target.

    Grayscale conversion, polarity flip when the page is brighter than the
    strokes (mean > 127), centered black padding to square, bilinear resize.
    """
    arr = np.asarray(raw)
    if arr.size == 0 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("empty image")
    img = to_grayscale(arr)
    if img.mean() > 127:
        img = 255 - img
    img = pad_square(img)
    if img.shape[0] != target:
        img = resize_bilinear(img, target, target)
    return img


def mirror_augment(corpus: list[np.ndarray]) -> list[np.ndarray]:
    """Originals followed by their horizontal flips; never flips vertically."""
    return list(corpus) + [hflip(img) for img in corpus]


def synth_corpus(n: int, seed: int) -> list[np.ndarray]:
    """Deterministic stand-in corpus: decode n seeded latents, uniform in [-2, 2]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    zs = rng.uniform(-2.0, 2.0, size=(n, 512))
    return [decode(z) for z in zs]


def write_corpus(directory, images: list[np.ndarray], names: list[str] | None = None) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    if names is None:
        names = [f"img_{i:05d}.png" for i in range(len(images))]
    if len(names) != len(images):
        raise ValueError("names/images length mismatch")
    for name, img in zip(names, images):
        save_png(os.path.join(directory, name), img)
    with open(os.path.join(directory, MANIFEST_NAME), "w", encoding="utf-8") as fh:
        fh.write("".join(name + "\n" for name in names))
    return names


def read_corpus(directory) -> tuple[list[np.ndarray], list[str]]:
    """Load a corpus in manifest order, or sorted PNG listing when no manifest."""
    manifest = os.path.join(directory, MANIFEST_NAME)
    if os.path.exists(manifest):
        with open(manifest, "r", encoding="utf-8") as fh:
            names = [ln.strip() for ln in fh if ln.strip()]
    else:
        names = sorted(
            f for f in os.listdir(directory) if f.lower().endswith(".png")
        )
    if not names:
        raise ValueError(f"no images found in {directory}")
    return [load_png(os.path.join(directory, name)) for name in names], names

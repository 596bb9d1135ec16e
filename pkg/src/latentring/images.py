"""Grayscale raster helpers: conversion, padding, resizing, flips, PNG IO.

The canonical in-memory image is a 2D uint8 array, row-major, 0 = black
background and 255 = full white stroke.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def as_image(arr) -> np.ndarray:
    img = np.asarray(arr)
    if img.ndim != 2:
        raise ValueError("expected a 2D grayscale array")
    if img.dtype != np.uint8:
        img = np.clip(np.rint(img.astype(np.float64)), 0, 255).astype(np.uint8)
    return img


def to_grayscale(raw) -> np.ndarray:
    """Collapse an HxW[xC] raster to uint8 grayscale using 0.299/0.587/0.114 luma."""
    arr = np.asarray(raw)
    if arr.ndim == 2:
        return as_image(arr)
    if arr.ndim == 3 and arr.shape[2] in (3, 4):
        rgb = arr[..., :3].astype(np.float64)
        luma = rgb @ np.asarray(LUMA_WEIGHTS)
        return np.clip(np.rint(luma), 0, 255).astype(np.uint8)
    raise ValueError(f"unsupported raster shape {arr.shape}")


def pad_square(img: np.ndarray) -> np.ndarray:
    """Center the content on a black square canvas of side max(h, w)."""
    h, w = img.shape
    side = max(h, w)
    out = np.zeros((side, side), dtype=np.uint8)
    top = (side - h) // 2
    left = (side - w) // 2
    out[top : top + h, left : left + w] = img
    return out


def resize_bilinear(img: np.ndarray, width: int, height: int) -> np.ndarray:
    pil = Image.fromarray(as_image(img), mode="L")
    return np.asarray(pil.resize((width, height), Image.BILINEAR))


def hflip(img: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(img[:, ::-1])


def encode_png(img: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(as_image(img), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(data)) as pil:
        pil.load()
        if pil.mode != "L":
            raise ValueError(f"expected 8-bit grayscale PNG, got mode {pil.mode}")
        return np.asarray(pil)


def save_png(path, img: np.ndarray) -> None:
    Image.fromarray(as_image(img), mode="L").save(path, format="PNG")


def load_png(path) -> np.ndarray:
    with Image.open(path) as pil:
        if pil.mode not in ("L", "I;16", "RGB", "RGBA", "P", "1"):
            pil = pil.convert("RGB")
        if pil.mode in ("P", "1", "I;16"):
            pil = pil.convert("L")
        arr = np.asarray(pil)
    if arr.ndim == 3:
        return to_grayscale(arr)
    return as_image(arr)

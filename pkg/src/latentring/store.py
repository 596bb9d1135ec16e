"""Saved-samples persistence backing the carousel.

A store is a directory:
    manifest.csv        one record per line: id, ISO timestamp, 512 floats
                        (9 significant digits, human-inspectable)
    <id>.latent.bin     the same latent as raw little-endian float64, the
                        canonical copy guaranteeing bit-exact restore
    <id>.png            128x128 thumbnail

The manifest is always rewritten via write-temp-then-rename, so readers see
either the old or the new state and a crash can never leave it unparseable.
Single writer; the class serializes its own mutations with a lock.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .images import load_png, resize_bilinear, save_png
from .latent import DIMS, validate_latent

MANIFEST = "manifest.csv"
THUMB_SIZE = 128


class SampleNotFound(KeyError):
    pass


@dataclass
class SavedSample:
    id: str
    created_at: str
    latent: np.ndarray

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.created_at,
            "latent": [float(x) for x in self.latent],
        }


class SampleStore:
    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)
        self._lock = threading.Lock()
        self._records: list[SavedSample] = self._load_manifest()

    # -- manifest IO --------------------------------------------------------

    def _manifest_path(self) -> str:
        return os.path.join(self.directory, MANIFEST)

    def _load_manifest(self) -> list[SavedSample]:
        path = self._manifest_path()
        if not os.path.exists(path):
            return []
        records = []
        with open(path, "r", encoding="utf-8") as fh:
            for ln in fh:
                ln = ln.strip()
                if not ln:
                    continue
                cells = ln.split(",")
                if len(cells) != 2 + DIMS:
                    raise ValueError(f"corrupt manifest record in {path}: {ln[:60]}...")
                sample_id, created_at = cells[0], cells[1]
                latent = self._load_latent_bin(sample_id)
                if latent is None:
                    # binary copy missing (hand-edited store): fall back to decimals
                    latent = np.asarray([float(c) for c in cells[2:]])
                records.append(SavedSample(sample_id, created_at, latent))
        return records

    def _write_manifest(self) -> None:
        path = self._manifest_path()
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            for rec in self._records:
                cells = [rec.id, rec.created_at] + [format(v, ".9g") for v in rec.latent]
                fh.write(",".join(cells) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    def _latent_bin_path(self, sample_id: str) -> str:
        return os.path.join(self.directory, f"{sample_id}.latent.bin")

    def _thumb_path(self, sample_id: str) -> str:
        return os.path.join(self.directory, f"{sample_id}.png")

    def _load_latent_bin(self, sample_id: str):
        path = self._latent_bin_path(sample_id)
        if not os.path.exists(path):
            return None
        raw = np.fromfile(path, dtype="<f8")
        if raw.size != DIMS:
            raise ValueError(f"corrupt latent file {path}")
        return raw

    # -- operations ---------------------------------------------------------

    def save_sample(self, latent, image: np.ndarray) -> SavedSample:
        """Persist (latent, thumbnail); returns the new record."""
        latent = validate_latent(latent)
        with self._lock:
            sample_id = uuid.uuid4().hex[:12]
            created_at = datetime.now(timezone.utc).isoformat(timespec="microseconds")
            latent.astype("<f8").tofile(self._latent_bin_path(sample_id))
            thumb = image
            if thumb.shape != (THUMB_SIZE, THUMB_SIZE):
                thumb = resize_bilinear(image, THUMB_SIZE, THUMB_SIZE)
            save_png(self._thumb_path(sample_id), thumb)
            record = SavedSample(sample_id, created_at, latent)
            self._records.append(record)
            self._write_manifest()
            return record

    def list_samples(self) -> list[SavedSample]:
        with self._lock:
            return list(self._records)

    def _find(self, sample_id: str) -> int:
        for i, rec in enumerate(self._records):
            if rec.id == sample_id:
                return i
        raise SampleNotFound(f"not found: {sample_id}")

    def restore_sample(self, sample_id: str) -> np.ndarray:
        """The stored latent, exactly as saved (read from the binary copy)."""
        with self._lock:
            rec = self._records[self._find(sample_id)]
            return rec.latent.copy()

    def delete_sample(self, sample_id: str) -> None:
        with self._lock:
            idx = self._find(sample_id)
            rec = self._records.pop(idx)
            self._write_manifest()
            for path in (self._latent_bin_path(rec.id), self._thumb_path(rec.id)):
                if os.path.exists(path):
                    os.remove(path)

    def thumbnail(self, sample_id: str) -> np.ndarray:
        with self._lock:
            self._find(sample_id)
            return load_png(self._thumb_path(sample_id))

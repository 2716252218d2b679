"""Intensity maps and their on-disk form (CSV payload + JSON sidecar)."""

from __future__ import annotations

import json
import os
import platform
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["IntensityMap", "atomic_write_text", "write_json", "environment_info"]


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def environment_info():
    import scipy

    from . import __version__

    return {
        "zigzag": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


@dataclass
class IntensityMap:
    """``|Psi_{n0, m}(Z_i)|^2`` on a distance grid.

    ``intensity[i, j]`` belongs to ``z_grid[i]`` and site ``sites[j]``.
    """

    z_grid: np.ndarray
    sites: np.ndarray
    intensity: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.z_grid = np.asarray(self.z_grid, dtype=float)
        self.sites = np.asarray(self.sites, dtype=int)
        self.intensity = np.asarray(self.intensity, dtype=float)
        if self.intensity.shape != (self.z_grid.size, self.sites.size):
            raise ValueError(
                f"intensity shape {self.intensity.shape} does not match grid "
                f"({self.z_grid.size}, {self.sites.size})"
            )

    @classmethod
    def from_amplitudes(cls, z_grid, amps, metadata=None):
        amps = np.asarray(amps)
        return cls(z_grid, np.arange(amps.shape[1]), np.abs(amps) ** 2, dict(metadata or {}))

    def row_sums(self):
        return self.intensity.sum(axis=1)

    def site(self, n):
        """Intensity of guide ``n`` along the grid."""
        return self.intensity[:, int(np.flatnonzero(self.sites == n)[0])]

    def at(self, Z):
        """Row closest to distance ``Z``."""
        return self.intensity[int(np.argmin(np.abs(self.z_grid - Z)))]

    def to_csv_text(self):
        lines = ["Z," + ",".join(str(s) for s in self.sites)]
        for z, row in zip(self.z_grid, self.intensity):
            lines.append(",".join(repr(float(v)) for v in (z, *row)))
        return "\n".join(lines) + "\n"

    def write(self, out_dir, stem="intensity"):
        """Write ``<stem>.csv`` and a ``meta.json`` sidecar into ``out_dir``."""
        out_dir = Path(out_dir)
        atomic_write_text(out_dir / f"{stem}.csv", self.to_csv_text())
        write_json(out_dir / "meta.json", self.metadata)
        return out_dir / f"{stem}.csv"

    @classmethod
    def read(cls, csv_path, meta_path=None):
        csv_path = Path(csv_path)
        with open(csv_path) as fh:
            header = fh.readline().strip().split(",")
        data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
        meta = {}
        meta_path = Path(meta_path) if meta_path else csv_path.with_name("meta.json")
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())
        return cls(data[:, 0], [int(s) for s in header[1:]], data[:, 1:], meta)

"""Emit standalone matplotlib scripts that render a written intensity map.

The scripts read the CSV next to them by relative path, so the output
directory can be moved or shared as a unit. matplotlib is only needed to
run the emitted script, not to produce it.
"""

from __future__ import annotations

from pathlib import Path

from .maps import IntensityMap, atomic_write_text

__all__ = ["emit_plot_script", "PLOT_STYLES"]

PLOT_STYLES = ("heatmap", "slice")

_HEADER = '''\
"""Plot {csv} produced by the zigzag lattice simulator."""
from pathlib import Path

import matplotlib.pyplot as plt
import numpy as np

HERE = Path(__file__).resolve().parent
raw = np.loadtxt(HERE / "{csv}", delimiter=",", skiprows=1, ndmin=2)
sites = np.array(open(HERE / "{csv}").readline().strip().split(",")[1:], dtype=int)
z, intensity = raw[:, 0], raw[:, 1:]
'''

_HEATMAP = '''
fig, ax = plt.subplots(figsize=(5, 4))
mesh = ax.pcolormesh(sites, z, intensity, shading="nearest", cmap="inferno")
fig.colorbar(mesh, ax=ax, label=r"$|\\Psi|^2$")
ax.set_xlabel("waveguide $m$")
ax.set_ylabel("$Z$")
ax.set_xlim(sites[0], {xmax})
ax.set_title("{title}")
'''

_SLICE_Z = '''
row = int(np.argmin(np.abs(z - {at_z!r})))
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(sites, intensity[row], "o", mfc="none")
ax.set_xlabel("waveguide $m$")
ax.set_ylabel(r"$|\\Psi|^2$")
ax.set_xlim(sites[0], {xmax})
ax.set_title("{title}, Z = %.3f" % z[row])
'''

_SLICE_SITE = '''
col = int(np.flatnonzero(sites == {at_site!r})[0])
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(z, intensity[:, col])
ax.set_xlabel("$Z$")
ax.set_ylabel(r"$|\\Psi_{{{at_site}}}|^2$")
ax.set_title("{title}, site {at_site}")
'''

_FOOTER = '''
fig.tight_layout()
fig.savefig(HERE / "{png}", dpi=150)
'''


def _title(meta):
    keys = [("lambda", "lambda"), ("alpha1", "alpha1"), ("alpha2", "alpha2"), ("n0", "n0")]
    parts = [f"{label}={meta[k]:g}" for k, label in keys if k in meta]
    return ", ".join(parts) or "intensity"


def emit_plot_script(imap: IntensityMap, style="heatmap", out_dir=".", *, csv_name="intensity.csv",
                     at_z=None, at_site=None, x_max=None, name=None):
    """Write a plotting script for ``imap`` into ``out_dir`` and return its path.

    ``style="heatmap"`` draws Z against waveguide index. ``style="slice"``
    draws one row (``at_z``) or one guide's trace (``at_site``); with
    neither given it traces the launch guide. ``x_max`` caps the site axis,
    which otherwise ends just past the last illuminated guide.
    """
    if style not in PLOT_STYLES:
        raise ValueError(f"style must be one of {PLOT_STYLES}, got {style!r}")
    meta = imap.metadata or {}
    if x_max is None:
        # stop the site axis a little past the last guide that ever carries light
        lit = imap.sites[imap.intensity.max(axis=0, initial=0.0) > 1e-4]
        x_max = min(int(imap.sites[-1]), int(lit.max()) + 5) if lit.size else imap.sites[-1]
    xmax = int(x_max)
    title = _title(meta)
    body = _HEADER.format(csv=csv_name)
    if style == "heatmap":
        body += _HEATMAP.format(xmax=xmax, title=title)
        stem = "heatmap"
    elif at_z is not None:
        body += _SLICE_Z.format(at_z=float(at_z), xmax=xmax, title=title)
        stem = "slice_z"
    else:
        site = int(at_site if at_site is not None else meta.get("n0", imap.sites[0]))
        body += _SLICE_SITE.format(at_site=site, title=title)
        stem = "slice_site"
    name = name or "plot.py"
    body += _FOOTER.format(png=Path(name).stem + f"_{stem}.png")
    path = Path(out_dir) / name
    atomic_write_text(path, body)
    return path

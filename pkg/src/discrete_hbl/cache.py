"""On-disk cache of subgroup lattices.

One JSON file per presentation.  Codes depend on the presentation, so the
file is keyed by the moduli as given; the invariant factors are recorded
alongside.  Anything unreadable or stale is ignored and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .groups import AbelianGroup
from .subgroups import DEFAULT_MAX_ORDER, SubgroupLattice, enumerate_subgroups, lattice_from_codes

CACHE_VERSION = 1
ENV_VAR = "DHBL_CACHE_DIR"


def cache_dir(explicit: str | os.PathLike | None = None) -> Path | None:
    d = explicit or os.environ.get(ENV_VAR)
    return Path(d) if d else None


def _path(root: Path, G: AbelianGroup) -> Path:
    key = hashlib.sha256(",".join(map(str, G.moduli)).encode()).hexdigest()[:24]
    return root / f"lattice-{key}.json"


def _read(path: Path, G: AbelianGroup) -> SubgroupLattice | None:
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if data.get("version") != CACHE_VERSION or data.get("moduli") != list(G.moduli):
        return None
    try:
        return lattice_from_codes(G, data["subgroups"])
    except (KeyError, TypeError, ValueError):
        return None


def load_lattice(G: AbelianGroup, root: Path | None, max_order: int = DEFAULT_MAX_ORDER) -> SubgroupLattice:
    """The lattice of ``G``, from ``root`` when cached there, else computed and stored."""
    if root is None or not G.is_finite:
        return enumerate_subgroups(G, max_order)
    path = _path(root, G)
    if G.order <= max_order:
        hit = _read(path, G)
        if hit is not None:
            return hit
    lattice = enumerate_subgroups(G, max_order)
    payload = {
        "version": CACHE_VERSION,
        "moduli": list(G.moduli),
        "invariant_factors": list(G.invariant_factors),
        "subgroups": [H.codes.tolist() for H in lattice],
    }
    try:
        root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except OSError:
        pass
    return lattice

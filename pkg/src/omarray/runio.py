"""Deterministic CSV and manifest emission.

Dialect: comma separated, '.' decimal point, floats at 17 significant digits
(round-trip exact for binary64), header row, LF line endings.  Files are
written atomically (temp file in the target directory, then rename) so a
failed run never leaves a partial artifact.  Every emitted file is digested
with SHA-256 for the run manifest.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np


def format_value(x) -> str:
    """One CSV cell: ints verbatim, bools as 0/1, floats at 17 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _atomic_write_bytes(path: str, payload: bytes):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list[str], rows) -> str:
    """Write rows atomically in the package dialect; returns the SHA-256 hex digest."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(x) for x in row))
    payload = ("\n".join(lines) + "\n").encode("ascii")
    _atomic_write_bytes(path, payload)
    return hashlib.sha256(payload).hexdigest()


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class ManifestBuilder:
    """Collects outputs and resolved settings; written once, after success."""

    experiment: str
    version: str
    config: dict
    resolved_defaults: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    _t0: float = field(default_factory=time.monotonic)

    def add_output(self, path: str, digest: str):
        self.outputs.append({
            "path": os.path.basename(path),
            "sha256": digest,
            "bytes": os.path.getsize(path),
        })

    def write(self, path: str):
        doc = {
            "artifact": "omarray",
            "version": self.version,
            "experiment": self.experiment,
            "config": self.config,
            "resolved_defaults": self.resolved_defaults,
            "overrides": self.overrides,
            "wall_clock_seconds": round(time.monotonic() - self._t0, 3),
            "outputs": self.outputs,
        }
        payload = (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("ascii")
        _atomic_write_bytes(path, payload)

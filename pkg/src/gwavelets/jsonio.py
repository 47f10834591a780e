"""Canonical JSON output and atomic file writes.

Keys are sorted and floats use Python's shortest round-trip ``repr``, so
identical inputs give byte-identical files and every float reads back
exactly.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path


def complex_parts(c):
    c = complex(c)
    # 0.0 rather than -0.0 keeps outputs stable under sign-of-zero noise
    return {"re": c.real + 0.0, "im": c.imag + 0.0}


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    atomic_write(path, dumps(obj))


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)

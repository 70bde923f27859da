"""On-disk cache of per-length factor series, with a content hash header.

Each file holds one series keyed by (p, m, n, precision).  The first line is
``sha256:<hex>`` over the JSON body and the format tag; a file whose hash
does not match is reported as corrupt and recomputed.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .series import LaurentSeries

log = logging.getLogger(__name__)

CACHE_ENV = "RIGID_DEFORM_CACHE_DIR"
FORMAT_TAG = "rigid-deform-gn/1"


def default_cache_dir() -> Path | None:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def _digest(body: str) -> str:
    return hashlib.sha256((FORMAT_TAG + "\n" + body).encode()).hexdigest()


class SeriesCache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.corrupt = 0

    def path(self, kind: str, p: int, m: int, n: int, prec: int) -> Path:
        return self.dir / f"{kind}_p{p}_m{m}_n{n}_P{prec}.json"

    def load(self, kind, p, m, n, prec):
        path = self.path(kind, p, m, n, prec)
        if not path.exists():
            self.misses += 1
            return None
        try:
            header, body = path.read_text().split("\n", 1)
            if header != "sha256:" + _digest(body):
                raise ValueError("content hash mismatch")
            data = json.loads(body)
            if (data["p"], data["m"], data["n"], data["prec"]) != (p, m, n, prec):
                raise ValueError("key mismatch")
            series = LaurentSeries.from_json(data["series"])
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("cache file %s is corrupt (%s); recomputing", path.name, exc)
            self.corrupt += 1
            self.misses += 1
            return None
        self.hits += 1
        return series, data.get("extra", {})

    def store(self, kind, p, m, n, prec, series: LaurentSeries, extra: dict | None = None):
        body = json.dumps({"p": p, "m": m, "n": n, "prec": prec, "series": series.to_json(),
                           "extra": extra or {}}, sort_keys=True)
        path = self.path(kind, p, m, n, prec)
        tmp = path.with_suffix(".tmp")
        tmp.write_text("sha256:" + _digest(body) + "\n" + body)
        tmp.replace(path)

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "corrupt": self.corrupt}

"""Deterministic CSV/JSON writers and run manifests for the CLI layer.

CSV output is RFC-4180 with a header row; floats are rendered with 17
significant digits so that repeated runs with identical parameters produce
byte-identical files.  JSON objects are written with sorted keys for the
same reason.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

__all__ = ["format_float", "write_csv", "write_json", "RunManifest"]

ARTIFACT_VERSION = "0.1.0"


def format_float(x: Any) -> Any:
    """Render floats (and complex parts) with 17 significant digits."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, float):
        return f"{x:.17g}"
    return x


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(x) for x in row])


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item"):  # numpy scalar
        return _jsonable(obj.item())
    if hasattr(obj, "tolist"):  # numpy array
        return _jsonable(obj.tolist())
    return obj


def write_json(path: str | Path, obj: Any) -> None:
    path = Path(path)
    with path.open("w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class RunManifest:
    """Provenance record written next to every CLI output file."""

    subcommand: str
    parameters: dict
    seed: int | None = None
    artifact_version: str = ARTIFACT_VERSION
    outputs: list = field(default_factory=list)
    duration_seconds: float | None = None

    def write(self, out_path: str | Path) -> Path:
        manifest_path = Path(str(out_path) + ".manifest.json")
        write_json(
            manifest_path,
            {
                "subcommand": self.subcommand,
                "parameters": self.parameters,
                "seed": self.seed,
                "artifact_version": self.artifact_version,
                "outputs": [str(p) for p in self.outputs],
                "duration_seconds": self.duration_seconds,
            },
        )
        return manifest_path


class StopWatch:
    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0
        return False

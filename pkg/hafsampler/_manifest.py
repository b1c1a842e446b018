"""Run manifests and output files.

Every CSV output starts with comment lines; the ``# config:`` line holds the
canonical JSON manifest (command, config, seed, version) that ``replay``
reads back. JSON outputs carry the same manifest under a ``"manifest"`` key.
"""
from __future__ import annotations

import contextlib
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, TextIO

from ._errors import GraphFormatError

logger = logging.getLogger(__name__)

CONFIG_PREFIX = "# config: "


def canonical_json(data: Any) -> str:
    """Key-sorted, whitespace-free JSON."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)


@dataclass(frozen=True)
class RunManifest:
    command: str
    config: dict
    seed: int | None
    version: str
    duration: float | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {"command": self.command, "config": self.config,
                "seed": self.seed, "version": self.version}

    def header(self) -> str:
        return CONFIG_PREFIX + canonical_json(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> RunManifest:
        try:
            return cls(command=data["command"], config=dict(data["config"]),
                       seed=data.get("seed"), version=data["version"])
        except (KeyError, TypeError) as exc:
            raise GraphFormatError(f"malformed run manifest: {exc}") from None


@contextlib.contextmanager
def open_output(out: str | Path) -> Iterator[TextIO]:
    """Writable text stream for ``out``; ``-`` is standard output."""
    if str(out) == "-":
        yield sys.stdout
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        yield fh


def write_csv(manifest: RunManifest, columns: list[str], rows: Iterable[Iterable[Any]],
              out: str | Path, extra: dict[str, str] | None = None) -> None:
    with open_output(out) as fh:
        fh.write(manifest.header() + "\n")
        for key, value in (extra or {}).items():
            fh.write(f"# {key}: {value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    logger.info("wrote %s output to %s", manifest.command, out)


def write_json(manifest: RunManifest, payload: dict, out: str | Path) -> None:
    with open_output(out) as fh:
        fh.write(json.dumps({"manifest": manifest.to_dict(), **payload},
                            indent=2, sort_keys=True, allow_nan=False))
        fh.write("\n")


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def read_manifest(path: str | Path) -> RunManifest:
    """Manifest embedded in a CSV header or a JSON output file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)["manifest"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise GraphFormatError(f"no run manifest: {exc}", str(path)) from None
        return RunManifest.from_dict(data)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith(CONFIG_PREFIX):
            try:
                return RunManifest.from_dict(json.loads(line[len(CONFIG_PREFIX):]))
            except json.JSONDecodeError as exc:
                raise GraphFormatError(f"bad manifest JSON: {exc}", str(path), lineno) from None
        if not line.startswith("#"):
            break
    raise GraphFormatError("no '# config:' header found", str(path))

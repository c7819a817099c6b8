"""Run manifests: one ``manifest.json`` per output directory."""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Union

from ._compat import Final, Self
from ._version import __version__
from .errors import FormatError, MissingArtifactError

MANIFEST_NAME: Final = "manifest.json"

PathLike = Union[str, Path]


@dataclass(frozen=True)
class RunManifest:
    """How an output directory was produced.

    Everything but ``timestamp`` is a pure function of the inputs and flags.
    """

    tool_version: str
    subcommand: str
    resolved_options: Mapping[str, Any] = field(default_factory=dict)
    input_digests: Mapping[str, str] = field(default_factory=dict)
    timestamp: str = ""

    def to_dict(self, include_timestamp: bool = True) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "tool_version": self.tool_version,
            "subcommand": self.subcommand,
            "resolved_options": dict(self.resolved_options),
            "input_digests": dict(self.input_digests),
        }
        if include_timestamp:
            data["timestamp"] = self.timestamp
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Self:
        data = json.loads(text)
        return cls(
            tool_version=data["tool_version"],
            subcommand=data["subcommand"],
            resolved_options=data.get("resolved_options", {}),
            input_digests=data.get("input_digests", {}),
            timestamp=data.get("timestamp", ""),
        )


def file_digest(path: PathLike) -> str:
    """``sha256:<hex>`` of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def write_manifest(
    out_dir: PathLike,
    subcommand: str,
    options: Mapping[str, Any],
    inputs: Iterable[PathLike] = (),
) -> RunManifest:
    manifest = RunManifest(
        tool_version=__version__,
        subcommand=subcommand,
        resolved_options=dict(sorted(options.items())),
        input_digests={str(path): file_digest(path) for path in inputs},
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    Path(out_dir, MANIFEST_NAME).write_text(manifest.to_json(), encoding="utf-8")
    return manifest


def read_manifest(directory: PathLike) -> RunManifest:
    path = Path(directory, MANIFEST_NAME)
    if not path.is_file():
        raise MissingArtifactError(path)
    try:
        return RunManifest.from_json(path.read_text(encoding="utf-8"))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"unreadable manifest: {exc}", path) from exc

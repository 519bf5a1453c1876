"""Run manifests: a flat ``key=value`` text file written next to every CSV."""
from __future__ import annotations

import shlex
from importlib import metadata
from pathlib import Path

from pydantic import BaseModel, Field

from errors import StructureError


def tool_version() -> str:
    try:
        return metadata.version("block-threshold")
    except metadata.PackageNotFoundError:
        return "0.1.0"


class RunManifest(BaseModel):
    subcommand: str
    argv: list[str]
    params: dict[str, str] = Field(default_factory=dict)
    master_seed: int
    version: str = Field(default_factory=tool_version)
    duration_s: float = 0.0
    extra: dict[str, str] = Field(default_factory=dict)

    def to_text(self) -> str:
        lines = [
            f"subcommand={self.subcommand}",
            f"argv={shlex.join(self.argv)}",
            f"master_seed={self.master_seed}",
            f"version={self.version}",
            f"duration_s={self.duration_s:.3f}",
        ]
        lines += [f"param.{key}={value}" for key, value in sorted(self.params.items())]
        lines += [f"result.{key}={value}" for key, value in sorted(self.extra.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunManifest":
        fields: dict[str, str] = {}
        params: dict[str, str] = {}
        extra: dict[str, str] = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, value = line.partition("=")
            if key.startswith("param."):
                params[key[len("param."):]] = value
            elif key.startswith("result."):
                extra[key[len("result."):]] = value
            else:
                fields[key] = value
        if "subcommand" not in fields or "master_seed" not in fields:
            raise StructureError("manifest lacks subcommand or master_seed")
        return cls(
            subcommand=fields["subcommand"],
            argv=shlex.split(fields.get("argv", "")),
            params=params,
            master_seed=int(fields["master_seed"]),
            version=fields.get("version", tool_version()),
            duration_s=float(fields.get("duration_s", 0.0)),
            extra=extra,
        )


def manifest_path(out_dir: Path, subcommand: str) -> Path:
    return out_dir / f"{subcommand.replace('-', '_')}_manifest.txt"


def write_manifest(manifest: RunManifest, out_dir: Path) -> Path:
    path = manifest_path(out_dir, manifest.subcommand)
    path.write_text(manifest.to_text(), encoding="utf-8", newline="\n")
    return path


def read_manifest(path: Path) -> RunManifest:
    return RunManifest.from_text(Path(path).read_text(encoding="utf-8"))

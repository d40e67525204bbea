"""Player profile persistence.

One JSON file per player. Saves write a sibling temp file, fsync it, then
os.replace it over the old one, so a crash at any point leaves either the
previous intact file or the new one, never a torn write. Every file carries
a trailing sha256 checksum over the rest of its payload; load refuses any
file whose checksum does not match.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional
from urllib.parse import quote

from cooking_code.progression import PlayerStats

DATA_DIR_ENV = "COOKING_CODE_DATA_DIR"
PROFILE_VERSION = 1


class ProfileError(Exception):
    pass


class ProfileCorruptError(ProfileError):
    """The file on disk fails its checksum or is not parseable."""


@dataclass
class Profile:
    player_id: str
    stats: PlayerStats = field(default_factory=PlayerStats)

    def to_json(self) -> dict:
        return {
            "version": PROFILE_VERSION,
            "player_id": self.player_id,
            "stats": self.stats.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Profile":
        return cls(
            player_id=str(data["player_id"]),
            stats=PlayerStats.from_json(data.get("stats", {})),
        )


def payload_checksum(payload: Mapping) -> str:
    """sha256 over the canonical JSON of the payload, checksum field excluded."""
    body = {k: v for k, v in payload.items() if k != "checksum"}
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def encode_profile(profile: Profile) -> str:
    payload = profile.to_json()
    payload["checksum"] = payload_checksum(payload)
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def decode_profile(text: str) -> Profile:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileCorruptError(f"profile is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "checksum" not in payload:
        raise ProfileCorruptError("profile has no checksum")
    if payload["checksum"] != payload_checksum(payload):
        raise ProfileCorruptError("profile checksum mismatch")
    try:
        return Profile.from_json(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ProfileCorruptError(f"profile payload malformed: {exc}") from exc


def default_data_dir() -> Path:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override)
    return Path.home() / ".cooking-code"


class ProfileStore:
    """Interface: load returns None for an unknown player; save is durable."""

    def load(self, player_id: str) -> Optional[Profile]:
        raise NotImplementedError

    def save(self, profile: Profile) -> None:
        raise NotImplementedError

    def load_or_create(self, player_id: str) -> Profile:
        profile = self.load(player_id)
        if profile is None:
            profile = Profile(player_id=player_id)
        return profile


class MemoryProfileStore(ProfileStore):
    """Non-durable store for tests and one-shot simulations."""

    def __init__(self):
        self._blobs: dict[str, str] = {}

    def load(self, player_id: str) -> Optional[Profile]:
        blob = self._blobs.get(player_id)
        if blob is None:
            return None
        return decode_profile(blob)

    def save(self, profile: Profile) -> None:
        self._blobs[profile.player_id] = encode_profile(profile)


def _write_atomic(path: Path, text: str) -> None:
    # the temp file lives next to the target so os.replace stays one-filesystem
    fd, tmp_name = tempfile.mkstemp(
        prefix=path.name + ".", suffix=".tmp", dir=str(path.parent)
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


class FileProfileStore(ProfileStore):
    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory is not None else default_data_dir()
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, player_id: str) -> Path:
        # percent-encode so arbitrary ids map to safe, unique filenames
        return self.directory / (quote(player_id, safe="") + ".json")

    def load(self, player_id: str) -> Optional[Profile]:
        path = self.path_for(player_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        return decode_profile(text)

    def save(self, profile: Profile) -> None:
        _write_atomic(self.path_for(profile.player_id), encode_profile(profile))

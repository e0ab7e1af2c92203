"""
Replay files: JSONL request/response pairs keyed by a digest of the request.

A ``ReplayStore`` opened for replay answers from the file and never touches
the network; one opened for recording appends every live exchange.
"""

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Any, Dict, Union

from errors import IoError, MalformedRecord, ReplayMiss

debug = logging.getLogger("ergdiv")


def request_digest(payload: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON form (sorted keys, no whitespace)"""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ReplayStore:
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: Dict[str, Dict[str, Any]] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise IoError(f"cannot read replay file: {e}", path=str(self.path)) from e
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                self._entries[entry["digest"]] = entry["response"]
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise MalformedRecord(f"bad replay entry: {e}", line=lineno, path=str(self.path)) from e
        debug.info(f"Loaded {len(self._entries)} replay entries from {self.path}")

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, payload: Dict[str, Any]) -> Dict[str, Any]:
        digest = request_digest(payload)
        try:
            return self._entries[digest]
        except KeyError:
            raise ReplayMiss(f"no recorded response for request {digest[:12]}", digest=digest,
                             path=str(self.path)) from None

    def record(self, payload: Dict[str, Any], response: Dict[str, Any]) -> None:
        digest = request_digest(payload)
        line = json.dumps({"digest": digest, "request": payload, "response": response},
                          sort_keys=True, ensure_ascii=False)
        with self._lock:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8", newline="\n") as f:
                    f.write(line + "\n")
                    f.flush()
            except OSError as e:
                raise IoError(f"cannot append to replay file: {e}", path=str(self.path)) from e
            self._entries[digest] = response
        debug.debug(f"Recorded response {digest[:12]}")

"""Optional helper to download dataset files, recording checksums.

The evaluation data (shared-task run submissions and qrels) is distributed
publicly; the CLI otherwise only consumes local paths.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path

import requests

logger = logging.getLogger(__name__)


def fetch_file(url: str, dest: str | Path, checksums_path: str | Path | None = None) -> Path:
    """Download ``url`` to ``dest``; record (or verify) its sha256 checksum.

    Checksums are stored one ``<sha256>  <filename>`` pair per line; on
    re-fetch a mismatch against the recorded value raises.
    """
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    response = requests.get(url, timeout=60)
    response.raise_for_status()
    dest.write_bytes(response.content)
    digest = hashlib.sha256(response.content).hexdigest()

    if checksums_path is not None:
        checksums_path = Path(checksums_path)
        recorded = {}
        if checksums_path.exists():
            for line in checksums_path.read_text().splitlines():
                if line.strip():
                    checksum, name = line.split(None, 1)
                    recorded[name.strip()] = checksum
        if dest.name in recorded:
            if recorded[dest.name] != digest:
                raise ValueError(
                    f"checksum mismatch for {dest.name}: "
                    f"recorded {recorded[dest.name]}, got {digest}"
                )
        else:
            recorded[dest.name] = digest
            checksums_path.write_text(
                "".join(f"{c}  {n}\n" for n, c in sorted(recorded.items()))
            )
    logger.info("fetched %s (%d bytes, sha256 %s)", url, len(response.content), digest)
    return dest

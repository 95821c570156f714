"""Stable hashing for RNG stream names."""

import hashlib


def stream_id(name: str) -> int:
    """Map a stream name to a stable 64-bit integer.

    Python's built-in ``hash`` is salted per process, so names go through SHA-256.
    """
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")

import hashlib
import json
from typing import Any, Mapping


def label_hash64(label: str) -> int:
    """64-bit blake2b digest of a stream label, as an unsigned integer."""
    digest = hashlib.blake2b(label.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'little')

def stable_digest(payload: Mapping[str, Any]) -> str:
    """sha256 over the canonical JSON form of a mapping"""
    canonical = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

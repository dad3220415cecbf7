"""Stable identifiers: per-check seeds and report digests.

Seeds and digests are derived with SHA-1 so they are identical across runs,
platforms and Python hash randomization.
"""

import hashlib
import json
from typing import Any, Mapping


def derive_seed(base_seed: int, label: str) -> int:
    """Derive a stable 32-bit seed for one named check from a base seed.

    Args:
        base_seed: The run-level seed (``EQUICHAIN_SEED`` or ``--seed``).
        label: Name of the check or reduction being sampled.

    Returns:
        A non-negative integer below 2**32.

    Examples:
        >>> derive_seed(7, "bar_reduction") == derive_seed(7, "bar_reduction")
        True
    """
    if not label:
        raise ValueError("label cannot be empty")
    digest = hashlib.sha1(f"{base_seed}:{label}".encode("utf-8")).hexdigest()
    return int(digest[:8], 16)


def report_digest(payload: Mapping[str, Any]) -> str:
    """16-character digest of a JSON-serializable report.

    Keys are sorted so the digest only depends on content.
    """
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()[:16]


def validate_digest(digest: str) -> bool:
    """Check that a digest has the expected format (16 hexadecimal characters)."""
    if not digest or len(digest) != 16:
        return False
    try:
        int(digest, 16)
        return True
    except ValueError:
        return False

"""Object identity: "<kind>_<8-char base32>" ids from a seedable generator."""

from __future__ import annotations

import random
import re

# Crockford base32 (lowercase): no i/l/o/u, so ids stay unambiguous in logs.
_ALPHABET = "0123456789abcdefghjkmnpqrstvwxyz"

ID_KINDS = frozenset(
    {"proj", "asset", "track", "clip", "anim", "sugg", "sess", "step", "prompt"}
)

_ID_RE = re.compile(r"^(proj|asset|track|clip|anim|sugg|sess|step|prompt)_[0-9a-z]{8}$")


def is_object_id(value: object) -> bool:
    return isinstance(value, str) and bool(_ID_RE.match(value))


def id_kind(object_id: str) -> str:
    """Kind prefix of an id string. Raises ValueError on malformed input."""
    if not is_object_id(object_id):
        raise ValueError(f"malformed object id: {object_id!r}")
    return object_id.split("_", 1)[0]


class IdGenerator:
    """Seedable id source. Uniqueness is enforced against a live-id callback,
    so regenerated projects with the same seed produce identical ids."""

    def __init__(self, seed: int | None = None):
        self._rng = random.Random(seed)

    def new(self, kind: str, taken: set[str] | None = None) -> str:
        if kind not in ID_KINDS:
            raise ValueError(f"unknown id kind: {kind!r}")
        while True:
            suffix = "".join(self._rng.choice(_ALPHABET) for _ in range(8))
            candidate = f"{kind}_{suffix}"
            if taken is None or candidate not in taken:
                return candidate

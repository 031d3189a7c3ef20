from __future__ import annotations

from typing import Iterable

from ..errors import UsageError

# Characters that carry meaning in instance files and derived symbol names.
FORBIDDEN_SYMBOL_PARTS = [
    "/",  # pair label separator
]
RESERVED_SYMBOLS = {"_"}  # pad


class CheckTools:
    @staticmethod
    def reject_bad_symbol(name: str) -> None:
        """Reject symbol names the file format cannot round-trip."""
        if not name or any(ch.isspace() for ch in name):
            raise UsageError(f"Invalid symbol name {name!r}: must be non-empty and contain no whitespace.")
        if name in RESERVED_SYMBOLS:
            raise UsageError(f"Invalid symbol name {name!r}: '_' is reserved for the pad symbol.")
        for bad in FORBIDDEN_SYMBOL_PARTS:
            if bad in name:
                raise UsageError(f"Invalid symbol name {name!r}: may not contain {bad!r}.")

    @staticmethod
    def reject_duplicates(names: Iterable[str], what: str = "symbol") -> None:
        seen: set[str] = set()
        for n in names:
            if n in seen:
                raise UsageError(f"duplicate {what} {n!r}")
            seen.add(n)

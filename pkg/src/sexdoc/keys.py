"""File- and URL-safe encoding of symbol names into topic keys.

A key is escape(package) + "____" + escape(name). The escape keeps
[A-Z0-9.-] verbatim and writes any other character as an underscore
followed by two uppercase hex digits, low nibble first, so that
VL::VL-ASSIGNSTMT->TYPE encodes as VL____VL-ASSIGNSTMT-_E3TYPE.
"""

from __future__ import annotations

from .reader import SourceSymbol

_VERBATIM = set("ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789.-")
_HEX = "0123456789ABCDEF"
_HEX_SET = set(_HEX)


class TopicKeyError(ValueError):
    """Raised for keys that cannot be decoded."""


def _escape(text: str) -> str:
    parts = []
    for ch in text:
        if ch in _VERBATIM:
            parts.append(ch)
        else:
            cp = ord(ch)
            if cp > 0xFF:
                raise TopicKeyError(f"cannot encode character {ch!r}")
            parts.append("_" + _HEX[cp & 0xF] + _HEX[cp >> 4])
    return "".join(parts)


def _unescape(text: str, key: str) -> str:
    parts = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "_":
            low, high = text[i + 1 : i + 2], text[i + 2 : i + 3]
            if low not in _HEX_SET or high not in _HEX_SET:
                raise TopicKeyError(f"malformed escape in key {key!r}")
            parts.append(chr(int(high + low, 16)))
            i += 3
        elif ch in _VERBATIM:
            parts.append(ch)
            i += 1
        else:
            raise TopicKeyError(f"invalid character {ch!r} in key {key!r}")
    return "".join(parts)


def encode_key(sym: SourceSymbol) -> str:
    return _escape(sym.package) + "____" + _escape(sym.name)


def decode_key(key: str) -> SourceSymbol:
    idx = key.find("____")
    if idx < 0:
        raise TopicKeyError(f"missing package separator in key {key!r}")
    package = _unescape(key[:idx], key)
    name = _unescape(key[idx + 4 :], key)
    if not package or not name:
        raise TopicKeyError(f"empty package or name in key {key!r}")
    return SourceSymbol(package, name)

"""Rule-based normalizers: integer values and date expressions.

Replaces the external number and temporal systems the pipeline would
otherwise depend on. Coverage is deliberately narrow and documented:
digit strings (optionally comma-grouped), English number words up to
the billions, and five date patterns.
"""

from __future__ import annotations

import re
from typing import Sequence

_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_SCALES = {"hundred": 100, "thousand": 1000, "million": 10**6, "billion": 10**9}

_GROUPED = re.compile(r"-?\d{1,3}(,\d{3})+\Z")
_PLAIN = re.compile(r"-?\d+\Z")


def parse_integer(text: str) -> int | None:
    """Extract an integer value from digits or English number words.

    Returns None when the text is not a recognized number.
    """
    s = text.strip().lower()
    if not s:
        return None
    if _PLAIN.match(s):
        return int(s)
    if _GROUPED.match(s):
        return int(s.replace(",", ""))

    words = [w for w in re.split(r"[\s\-]+", s) if w and w != "and"]
    if not words:
        return None
    total = 0
    current = 0
    saw_number = False
    for w in words:
        if w in _UNITS:
            current += _UNITS[w]
            saw_number = True
        elif w in _TENS:
            current += _TENS[w]
            saw_number = True
        elif w == "hundred":
            current = (current or 1) * 100
            saw_number = True
        elif w in _SCALES and w != "hundred":
            total += (current or 1) * _SCALES[w]
            current = 0
            saw_number = True
        elif _PLAIN.match(w):
            current += int(w)
            saw_number = True
        else:
            return None
    return total + current if saw_number else None


_MONTHS = {
    "january": 1, "february": 2, "march": 3, "april": 4, "may": 5, "june": 6,
    "july": 7, "august": 8, "september": 9, "october": 10, "november": 11,
    "december": 12,
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "jun": 6, "jul": 7, "aug": 8,
    "sep": 9, "sept": 9, "oct": 10, "nov": 11, "dec": 12,
}
_ISO = re.compile(r"(\d{4})-(\d{2})-(\d{2})\Z")


def _month(token: str) -> int | None:
    return _MONTHS.get(token.lower().rstrip("."))


def _year4(token: str) -> int | None:
    if re.fullmatch(r"\d{4}", token) and 1000 <= int(token) <= 2999:
        return int(token)
    return None


def _day(token: str) -> int | None:
    if re.fullmatch(r"\d{1,2}", token) and 1 <= int(token) <= 31:
        return int(token)
    return None


def parse_date_fields(tokens: Sequence[str]) -> dict[str, int] | None:
    """Recognize a date from a span of tokens.

    Patterns: "Month D, YYYY", "Month YYYY", "YYYY-MM-DD", "YYYY",
    "Month D". Punctuation tokens are ignored. Returns the recognized
    {year, month, day} subset, or None when nothing matches.
    """
    toks = [t for t in tokens if any(ch.isalnum() for ch in t)]
    if len(toks) == 1:
        t = toks[0]
        m = _ISO.match(t)
        if m:
            year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
            if 1 <= month <= 12 and 1 <= day <= 31:
                return {"year": year, "month": month, "day": day}
            return None
        y = _year4(t)
        if y is not None:
            return {"year": y}
        return None
    if len(toks) == 2:
        mo = _month(toks[0])
        if mo is None:
            return None
        y = _year4(toks[1])
        if y is not None:
            return {"year": y, "month": mo}
        d = _day(toks[1])
        if d is not None:
            return {"month": mo, "day": d}
        return None
    if len(toks) == 3:
        mo = _month(toks[0])
        d = _day(toks[1])
        y = _year4(toks[2])
        if mo is not None and d is not None and y is not None:
            return {"year": y, "month": mo, "day": d}
        return None
    return None

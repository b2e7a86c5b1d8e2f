"""Jaro-Winkler string similarity."""

from __future__ import annotations


def jaro_winkler(a: str, b: str, prefix_scale: float = 0.1, max_prefix: int = 4) -> float:
    """Jaro similarity with the Winkler common-prefix bonus, in [0, 1]."""
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0

    window = max(max(la, lb) // 2 - 1, 0)
    a_hit = [False] * la
    b_hit = [False] * lb
    matches = 0
    for i, ca in enumerate(a):
        lo = max(0, i - window)
        hi = min(i + window + 1, lb)
        for j in range(lo, hi):
            if not b_hit[j] and b[j] == ca:
                a_hit[i] = True
                b_hit[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0

    transpositions = 0
    j = 0
    for i in range(la):
        if not a_hit[i]:
            continue
        while not b_hit[j]:
            j += 1
        if a[i] != b[j]:
            transpositions += 1
        j += 1

    m = float(matches)
    jaro = (m / la + m / lb + (m - transpositions / 2.0) / m) / 3.0

    prefix = 0
    for ca, cb in zip(a, b):
        if ca != cb or prefix == max_prefix:
            break
        prefix += 1
    return jaro + prefix * prefix_scale * (1.0 - jaro)

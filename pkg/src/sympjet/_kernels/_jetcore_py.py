"""Pure-Python jet coefficient kernels.

Twin of the compiled ``_jetcore`` extension; both expose the same three
functions over ``dict[tuple[int, ...], rational]`` coefficient maps.  The
maps are canonical: no zero values, no key of total degree above the
truncation order.
"""

from __future__ import annotations


def mul_trunc(a: dict, b: dict, order: int) -> dict:
    """Product of two coefficient maps, truncated to total degree <= order."""
    if not a or not b:
        return {}
    if len(b) < len(a):
        a, b = b, a
    items_b = sorted((sum(kb), kb, vb) for kb, vb in b.items())
    out: dict = {}
    for ka, va in a.items():
        budget = order - sum(ka)
        if budget < 0:
            continue
        for db, kb, vb in items_b:
            if db > budget:
                break
            key = tuple(x + y for x, y in zip(ka, kb))
            cur = out.get(key)
            val = va * vb if cur is None else cur + va * vb
            if val:
                out[key] = val
            elif cur is not None:
                del out[key]
    return out


def iadd_scaled(acc: dict, b: dict, s) -> None:
    """In-place ``acc += s*b``, dropping entries that cancel to zero."""
    if not s or not b:
        return
    for key, vb in b.items():
        cur = acc.get(key)
        val = s * vb if cur is None else cur + s * vb
        if val:
            acc[key] = val
        elif cur is not None:
            del acc[key]


def scale(a: dict, s) -> dict:
    """New map ``s*a``; empty when s == 0."""
    if not s:
        return {}
    return {key: s * va for key, va in a.items()}

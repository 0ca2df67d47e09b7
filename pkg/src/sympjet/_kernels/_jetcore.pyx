# cython: boundscheck=False, wraparound=False
"""Compiled jet coefficient kernels.

Semantics match sympjet._kernels._jetcore_py exactly; coefficient values are
opaque exact-rational Python objects, the win is C-level looping over the
sparse maps and exponent tuples.
"""

from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM
from cpython.ref cimport Py_INCREF


cdef inline long _degree(tuple key):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(key)
    cdef long total = 0
    for i in range(n):
        total += <object>PyTuple_GET_ITEM(key, i)
    return total


cdef inline tuple _add_keys(tuple ka, tuple kb):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(ka)
    cdef tuple out = PyTuple_New(n)
    cdef object s
    for i in range(n):
        s = (<object>PyTuple_GET_ITEM(ka, i)) + (<object>PyTuple_GET_ITEM(kb, i))
        Py_INCREF(s)
        PyTuple_SET_ITEM(out, i, s)
    return out


def mul_trunc(dict a, dict b, long order):
    """Product of two coefficient maps, truncated to total degree <= order."""
    cdef dict out = {}
    if not a or not b:
        return out
    if len(b) < len(a):
        a, b = b, a
    cdef list items_b = sorted([(_degree(kb), kb, vb) for kb, vb in b.items()])
    cdef Py_ssize_t nb = len(items_b)
    cdef Py_ssize_t ib
    cdef long budget, db
    cdef tuple ka, kb, key
    cdef object va, vb, cur, val, entry
    for ka, va in a.items():
        budget = order - _degree(ka)
        if budget < 0:
            continue
        for ib in range(nb):
            entry = <object>items_b[ib]
            db = <object>PyTuple_GET_ITEM(<tuple>entry, 0)
            if db > budget:
                break
            kb = <tuple>PyTuple_GET_ITEM(<tuple>entry, 1)
            vb = <object>PyTuple_GET_ITEM(<tuple>entry, 2)
            key = _add_keys(ka, kb)
            cur = out.get(key)
            if cur is None:
                val = va * vb
            else:
                val = cur + va * vb
            if val:
                out[key] = val
            elif cur is not None:
                del out[key]
    return out


def iadd_scaled(dict acc, dict b, s) -> None:
    """In-place ``acc += s*b``, dropping entries that cancel to zero."""
    cdef tuple key
    cdef object vb, cur, val
    if not s or not b:
        return
    for key, vb in b.items():
        cur = acc.get(key)
        if cur is None:
            val = s * vb
        else:
            val = cur + s * vb
        if val:
            acc[key] = val
        elif cur is not None:
            del acc[key]


def scale(dict a, s):
    """New map ``s*a``; empty when s == 0."""
    cdef dict out = {}
    cdef tuple key
    cdef object va
    if not s:
        return out
    for key, va in a.items():
        out[key] = s * va
    return out

"""Exact linear algebra over the coefficient field (thin layer over sympy's DomainMatrix)."""

from __future__ import annotations

from sympy import GF as _SymGF
from sympy import QQ as _SymQQ
from sympy.polys.matrices import DomainMatrix


def _domain(field):
    p = field.characteristic
    return _SymGF(p) if p else _SymQQ


def _matrix(field, rows, ncols):
    K = _domain(field)
    return DomainMatrix([[K(int(a)) if field.characteristic else K.convert(a) for a in r] for r in rows],
                        (len(rows), ncols), K)


def _back(field, a):
    p = field.characteristic
    return int(a) % p if p else field(a)


def rank(field, rows, ncols: int | None = None) -> int:
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _matrix(field, rows, ncols).rank()


def nullspace(field, rows, ncols: int) -> list[list]:
    """Basis of {v : rows · v = 0}."""
    if ncols == 0:
        return []
    if not rows:
        one, zero = field.one, field.zero
        return [[one if i == j else zero for j in range(ncols)] for i in range(ncols)]
    ns = _matrix(field, rows, ncols).nullspace()
    if ns.shape[0] == 0:
        return []
    return [[_back(field, a) for a in r] for r in ns.to_list()]


def solve(field, rows, rhs) -> list | None:
    """Some v with rows · v = rhs, or None when the system is inconsistent."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not aug:
        return []
    red, pivots = _matrix(field, aug, ncols + 1).rref()
    if ncols in pivots:
        return None
    red = red.to_list()
    v = [field.zero] * ncols
    for i, j in enumerate(pivots):
        v[j] = _back(field, red[i][ncols])
    return v

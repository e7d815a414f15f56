"""Sparse exact linear algebra over Q.

Vectors are dicts mapping hashable, mutually comparable coordinate labels to
nonzero Fractions.  The incremental echelon supports membership tests with
exact witnesses and nullspace extraction (a column that reduces to zero
yields the dependency expressing it in terms of earlier columns).
"""

from __future__ import annotations

from fractions import Fraction


class Echelon:
    """Row space accumulator in (partial) echelon form.

    Each stored row is normalized so that its pivot (its largest coordinate)
    has coefficient 1.  With `track=True`, every row carries the combination
    of originally inserted vectors it equals, keyed by the caller's tags.
    """

    __slots__ = ("rows", "track")

    def __init__(self, track: bool = False):
        self.rows = {}  # pivot coordinate -> (row vector, combination or None)
        self.track = track

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict):
        """Reduce vec against the stored rows.

        Returns (residual, combo) with vec == residual + sum(combo[t] * original[t]).
        combo is None unless tracking is enabled.
        """
        vec = dict(vec)
        combo = {} if self.track else None
        while True:
            pivot = None
            for c in vec:
                if c in self.rows and (pivot is None or c > pivot):
                    pivot = c
            if pivot is None:
                break
            coeff = vec[pivot]
            row, rcombo = self.rows[pivot]
            for c2, v2 in row.items():
                nv = vec.get(c2, _ZERO) - coeff * v2
                if nv:
                    vec[c2] = nv
                else:
                    vec.pop(c2, None)
            if self.track:
                for t, v2 in rcombo.items():
                    nv = combo.get(t, _ZERO) + coeff * v2
                    if nv:
                        combo[t] = nv
                    else:
                        combo.pop(t, None)
        return vec, combo

    def insert(self, vec: dict, tag=None):
        """Insert vec; return None if it increased the rank, otherwise the
        dependency combo with vec == sum(combo[t] * original[t])."""
        residual, combo = self.reduce(vec)
        if not residual:
            return combo if self.track else {}
        pivot = max(residual)
        pc = residual[pivot]
        row = {c: v / pc for c, v in residual.items()}
        rcombo = None
        if self.track:
            rcombo = {t: -v / pc for t, v in combo.items()}
            nv = rcombo.get(tag, _ZERO) + Fraction(1) / pc
            if nv:
                rcombo[tag] = nv
            else:
                rcombo.pop(tag, None)
        self.rows[pivot] = (row, rcombo)
        return None

    def contains(self, vec: dict) -> bool:
        residual, _ = self.reduce(vec)
        return not residual


_ZERO = Fraction(0)


def vec_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, _ZERO) + scale * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def solve(columns, rhs, track_tags=None):
    """Solve sum(x_i * columns_i) == rhs exactly.

    Returns the coefficient dict {tag: Fraction} or None when inconsistent.
    """
    ech = Echelon(track=True)
    tags = track_tags or list(range(len(columns)))
    for tag, col in zip(tags, columns):
        ech.insert(col, tag)
    residual, combo = ech.reduce(rhs)
    if residual:
        return None
    return combo


def nullspace(columns, tags):
    """Spanning set of dependencies sum(x_i * columns_i) == 0.

    Each returned dict maps tags to coefficients of one dependency.
    """
    ech = Echelon(track=True)
    out = []
    for tag, col in zip(tags, columns):
        if not col:
            out.append({tag: Fraction(1)})
            continue
        dep = ech.insert(col, tag)
        if dep is not None:
            dep = dict(dep)
            nv = dep.get(tag, _ZERO) - 1
            if nv:
                dep[tag] = nv
            else:
                dep.pop(tag, None)
            # dep now satisfies sum(dep[t] * col[t]) == 0 with dep[tag] = -1
            out.append({t: -v for t, v in dep.items()})
    return out

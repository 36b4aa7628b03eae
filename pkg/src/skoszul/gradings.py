"""Maslov/Alexander bigradings, the groupoid of affine-plane gradings, and
the Heisenberg repackaging.

All arithmetic is exact (fractions; denominators are powers of 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra_k import KMono, SIGMA
from .algebra_kdual import DualMono

Bigrading = tuple[Fraction, Fraction]


def bigrading(a, b) -> Bigrading:
    return (Fraction(a), Fraction(b))


@dataclass(frozen=True)
class AffineMap2:
    """x -> M x + t with M = [[a, b], [c, d]] invertible."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    tx: Fraction
    ty: Fraction

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("singular linear part")

    def apply(self, v):
        x, y = v
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def compose(self, other: "AffineMap2") -> "AffineMap2":
        """self after other."""
        o = other
        return AffineMap2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.a * o.tx + self.b * o.ty + self.tx,
            self.c * o.tx + self.d * o.ty + self.ty,
        )

    def inverse(self) -> "AffineMap2":
        det = self.a * self.d - self.b * self.c
        ia, ib, ic, id_ = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineMap2(ia, ib, ic, id_,
                          -(ia * self.tx + ib * self.ty),
                          -(ic * self.tx + id_ * self.ty))

    @property
    def is_identity(self) -> bool:
        return self == affine_identity()

    def power(self, n: int) -> "AffineMap2":
        if n < 0:
            return self.inverse().power(-n)
        out = affine_identity()
        for _ in range(n):
            out = out.compose(self)
        return out


def _mk(a, b, c, d, tx, ty):
    f = Fraction
    return AffineMap2(f(a), f(b), f(c), f(d), f(tx), f(ty))


def affine_identity() -> AffineMap2:
    return _mk(1, 0, 0, 1, 0, 0)


def translation(tx, ty) -> AffineMap2:
    return _mk(1, 0, 0, 1, tx, ty)


LAMBDA0 = translation(1, 1)
LAMBDA1 = translation(1, 0)


def lam(idem: int) -> AffineMap2:
    return LAMBDA0 if idem == 0 else LAMBDA1


G_SIGMA = _mk(1, 0, Fraction(1, 2), Fraction(-1, 2), 0, 0)
G_TAU = _mk(0, 1, Fraction(1, 2), Fraction(-1, 2), 0, 0)


@dataclass(frozen=True)
class GroupoidElt:
    """An affine map intertwining the source and target lambda shifts.

    src/tgt follow the algebra: an element of i_b . A . i_a grades by a map
    from i_a (its right idempotent) to i_b (its left idempotent).
    """

    map: AffineMap2
    src: int
    tgt: int

    def __post_init__(self):
        if self.map.compose(lam(self.src)) != lam(self.tgt).compose(self.map):
            raise ValueError("map does not intertwine the lambda translations")

    def compose(self, other: "GroupoidElt") -> "GroupoidElt":
        if self.src != other.tgt:
            raise ValueError("groupoid composition mismatch")
        return GroupoidElt(self.map.compose(other.map), other.src, self.tgt)

    @property
    def is_identity(self) -> bool:
        return self.src == self.tgt and self.map.is_identity


def groupoid_identity(idem: int) -> GroupoidElt:
    return GroupoidElt(affine_identity(), idem, idem)


def lam_elt(idem: int) -> GroupoidElt:
    return GroupoidElt(lam(idem), idem, idem)


def grading_k(m: KMono) -> tuple[Bigrading, GroupoidElt]:
    """(gr_w, gr_z) on the polynomial block, (gr, A) elsewhere, plus the
    groupoid-valued grading."""
    if (m.left, m.right) == (0, 0):
        bg = bigrading(-2 * m.e1, -2 * m.e2)
        return bg, GroupoidElt(translation(*bg), 0, 0)
    bg = bigrading(-2 * m.e1, m.e2)
    tr = translation(*bg)
    if m.letter is None:
        return bg, GroupoidElt(tr, 1, 1)
    base = G_SIGMA if m.letter == SIGMA else G_TAU
    return bg, GroupoidElt(tr.compose(base), 0, 1)


_DUAL_LETTER_MAPS = {
    "w": translation(1, -1),
    "z": translation(-1, 1),
    "f+": translation(-1, -1),
    "f-": translation(-1, 1),
    "s": G_SIGMA.inverse().compose(LAMBDA1.inverse()),
    "t": G_TAU.inverse().compose(LAMBDA1.inverse()),
}

_DUAL_LETTER_IDEMS = {
    "w": (0, 0), "z": (0, 0), "f+": (1, 1), "f-": (1, 1), "s": (0, 1), "t": (0, 1),
}


def grading_kdual(m: DualMono) -> tuple[Bigrading, GroupoidElt]:
    g = groupoid_identity(m.left)
    for letter in m.core:
        li, ri = _DUAL_LETTER_IDEMS[letter]
        g = g.compose(GroupoidElt(_DUAL_LETTER_MAPS[letter], ri, li))
    if m.theta:
        g = g.compose(lam_elt(m.right))
    if (m.left, m.right) == (0, 1):
        # Maslov/Alexander on the bridge: anchored so (gr, A)(s) = (-1, 0)
        bg = (g.map.tx, g.map.ty + 1)
    else:
        bg = (g.map.tx, g.map.ty)
    return bg, g


def heisenberg_collapse(g: GroupoidElt) -> AffineMap2:
    """Conjugate/translate the grading onto the idempotent-1 corner via the
    sigma grading; lands in the Heisenberg subgroup."""
    if (g.src, g.tgt) == (0, 0):
        out = G_SIGMA.compose(g.map).compose(G_SIGMA.inverse())
    elif (g.src, g.tgt) == (0, 1):
        out = g.map.compose(G_SIGMA.inverse())
    else:
        out = g.map
    if not (out.a == out.d == 1 and out.c == 0):
        raise AssertionError(f"collapse left the Heisenberg subgroup: {out}")
    return out


def bigrading_add_k(a: KMono, b: KMono) -> Bigrading:
    """Sum of bigradings for a composable product in K, with the twisted
    rule when a is a sigma/tau multiple and b is polynomial."""
    ga, _ = grading_k(a)
    gb, _ = grading_k(b)
    if a.letter is not None and (b.left, b.right) == (0, 0):
        grw, grz = gb
        if a.letter == SIGMA:
            add = (grw, (grw - grz) / 2)
        else:
            add = (grz, (grw - grz) / 2)
        return (ga[0] + add[0], ga[1] + add[1])
    return (ga[0] + gb[0], ga[1] + gb[1])


def compose_many(elts) -> GroupoidElt:
    elts = list(elts)
    out = elts[0]
    for e in elts[1:]:
        out = out.compose(e)
    return out

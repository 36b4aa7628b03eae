"""Exact arithmetic in the surgery algebra K over the idempotent ring I0+I1.

Monomials come in three shapes, one per nonzero idempotent block:

    i0.K.i0 = F2[W, Z]            (polynomial block)
    i1.K.i1 = F2[U, T, T^-1]      (Laurent block)
    i1.K.i0 = F2[U, T, T^-1]<sigma, tau>   (arrow block)

i0.K.i1 = 0.  Elements are finite F2-sums, stored as frozensets of
monomials (set symmetric difference = addition mod 2).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

I0 = 0
I1 = 1

SIGMA = "sigma"
TAU = "tau"

# sigma*W = U T^-1 sigma, sigma*Z = T sigma, tau*W = T^-1 tau, tau*Z = U T tau.


@dataclass(frozen=True)
class KMono:
    """One monomial of K.  (left, right) idempotents fix the block:

    (0,0): W^e1 Z^e2, e1, e2 >= 0
    (1,1): U^e1 T^e2, e1 >= 0
    (1,0): U^e1 T^e2 * letter, letter in {sigma, tau}
    """

    left: int
    right: int
    e1: int
    e2: int
    letter: str | None = None

    def __post_init__(self):
        if (self.left, self.right) not in ((0, 0), (1, 1), (1, 0)):
            raise ValueError(f"no such idempotent block: {self.left},{self.right}")
        if self.e1 < 0:
            raise ValueError("negative W/U exponent")
        if (self.left, self.right) == (0, 0) and (self.e2 < 0 or self.letter):
            raise ValueError("bad polynomial monomial")
        if (self.left, self.right) == (1, 1) and self.letter:
            raise ValueError("bad Laurent monomial")
        if (self.left, self.right) == (1, 0) and self.letter not in (SIGMA, TAU):
            raise ValueError("arrow monomial needs sigma or tau")

    @property
    def is_unit(self) -> bool:
        return self.left == self.right and self.e1 == 0 and self.e2 == 0

    @property
    def degree(self) -> int:
        if self.left == 0:
            return self.e1 + self.e2
        return self.e1 + abs(self.e2)

    def wt_u(self) -> int:
        """Largest i with self = U^i * (monomial); U means WZ in idempotent 0."""
        if (self.left, self.right) == (0, 0):
            return min(self.e1, self.e2)
        return self.e1

    def __mul__(self, other: "KMono"):
        if not isinstance(other, KMono):
            return NotImplemented
        if self.right != other.left:
            return None
        if self.left == 0:
            return KMono(0, 0, self.e1 + other.e1, self.e2 + other.e2)
        if self.letter is None:
            # Laurent * (Laurent or arrow): exponents add.
            return KMono(1, other.right, self.e1 + other.e1, self.e2 + other.e2,
                         other.letter)
        # arrow * polynomial, driven by sigma W = U T^-1 sigma etc.
        k, l = other.e1, other.e2
        if self.letter == SIGMA:
            return KMono(1, 0, self.e1 + k, self.e2 + l - k, SIGMA)
        return KMono(1, 0, self.e1 + l, self.e2 + l - k, TAU)

    def __str__(self) -> str:
        parts = []
        if self.left == 0:
            parts += _pow("W", self.e1) + _pow("Z", self.e2)
        else:
            parts += _pow("U", self.e1) + _pow("T", self.e2)
        if self.letter:
            parts.append(self.letter)
        if not parts:
            return f"i{self.left}"
        return " ".join(parts)


def _pow(var, e):
    if e == 0:
        return []
    if e == 1:
        return [var]
    return [f"{var}^{e}"]


def unit(idem: int) -> KMono:
    return KMono(idem, idem, 0, 0)


def wz(i: int, j: int) -> KMono:
    return KMono(0, 0, i, j)


def ut(i: int, j: int) -> KMono:
    return KMono(1, 1, i, j)


def arrow(letter: str, i: int = 0, j: int = 0) -> KMono:
    return KMono(1, 0, i, j, letter)


W = wz(1, 0)
Z = wz(0, 1)
U1 = ut(1, 0)
T = ut(0, 1)
Tinv = ut(0, -1)
U0 = wz(1, 1)  # ZW = U inside the polynomial block
sigma = arrow(SIGMA)
tau = arrow(TAU)

ZERO: frozenset = frozenset()


def kelt(*monos: KMono) -> frozenset:
    out = set()
    for m in monos:
        if m in out:
            out.remove(m)
        else:
            out.add(m)
    return frozenset(out)


def _as_elt(a) -> frozenset:
    if isinstance(a, KMono):
        return frozenset((a,))
    return a


def k_add(a, b) -> frozenset:
    return _as_elt(a) ^ _as_elt(b)


def k_mul(a, b) -> frozenset:
    """Bilinear product; idempotent-mismatched pairs contribute 0."""
    out = set()
    for ma in _as_elt(a):
        for mb in _as_elt(b):
            m = ma * mb
            if m is not None:
                out ^= {m}
    return frozenset(out)


def k_derivative(a, variable: str) -> frozenset:
    """Formal d/dU or d/dT mod 2 on the Laurent block."""
    out = set()
    for m in _as_elt(a):
        if (m.left, m.right) != (1, 1):
            raise ValueError(f"derivative of {m}: not in i1.K.i1")
        if variable == "U":
            if m.e1 % 2:
                out ^= {ut(m.e1 - 1, m.e2)}
        elif variable == "T":
            if m.e2 % 2:
                out ^= {ut(m.e1, m.e2 - 1)}
        else:
            raise ValueError(f"unknown variable {variable!r}")
    return frozenset(out)


def wt_u(a) -> int:
    """min over terms; infinity convention not needed for finite use sites."""
    monos = _as_elt(a)
    if not monos:
        raise ValueError("wt_U of 0")
    return min(m.wt_u() for m in monos)


def format_kelt(a) -> str:
    monos = _as_elt(a)
    if not monos:
        return "0"
    return " + ".join(sorted(str(m) for m in monos))


_TOKEN = re.compile(r"^([WZUT])(?:\^(-?\d+))?$")


def parse_kmono(text: str, left: int | None = None, right: int | None = None) -> KMono:
    """Parse one monomial, e.g. 'W^2 Z', 'U T^-1 tau', 'i0'.

    U and T alone do not determine the block, so callers can pass idempotent
    hints; a lone 'U^k' defaults to the Laurent block unless hinted to (0,0).
    """
    text = text.strip()
    if text in ("i0", "i1"):
        e = int(text[1])
        if left not in (None, e) or right not in (None, e):
            raise ValueError(f"unit {text} does not match idempotent hint")
        return unit(e)
    exps = {"W": 0, "Z": 0, "U": 0, "T": 0}
    letter = None
    for tok in text.split():
        if tok in ("sigma", "s"):
            letter = SIGMA
            continue
        if tok in ("tau", "t"):
            letter = TAU
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad K monomial token {tok!r} in {text!r}")
        var, e = m.group(1), int(m.group(2) or 1)
        if var != "T" and e < 0:
            raise ValueError(f"negative exponent on {var} in {text!r}")
        exps[var] += e
    if letter:
        if exps["W"] or exps["Z"]:
            raise ValueError(f"{text!r}: sigma/tau monomials live over U,T")
        return arrow(letter, exps["U"], exps["T"])
    if exps["W"] or exps["Z"]:
        if exps["T"]:
            raise ValueError(f"{text!r} mixes W/Z with T")
        # a U-factor inside the polynomial block means WZ
        return wz(exps["W"] + exps["U"], exps["Z"] + exps["U"])
    if exps["T"] or (left, right) in ((1, 1), (1, None), (None, 1)) or left == 1 or right == 1:
        return ut(exps["U"], exps["T"])
    if left == 0 or right == 0:
        return wz(exps["U"], exps["U"])
    # bare U^k with no hint: Laurent block
    return ut(exps["U"], exps["T"])


def parse_kelt(text: str, left: int | None = None, right: int | None = None) -> frozenset:
    text = text.strip()
    if text == "0":
        return ZERO
    return kelt(*(parse_kmono(t, left, right) for t in text.split("+")))


def kmono_range(left: int, right: int, max_degree: int):
    """All monomials of the given block with degree <= max_degree."""
    if (left, right) == (0, 0):
        for i in range(max_degree + 1):
            for j in range(max_degree + 1 - i):
                yield wz(i, j)
    elif (left, right) == (1, 1):
        for i in range(max_degree + 1):
            for j in range(-(max_degree - i), max_degree - i + 1):
                yield ut(i, j)
    elif (left, right) == (1, 0):
        for i in range(max_degree + 1):
            for j in range(-(max_degree - i), max_degree - i + 1):
                yield arrow(SIGMA, i, j)
                yield arrow(TAU, i, j)


def all_kmonos(max_degree: int):
    for pair in ((0, 0), (1, 1), (1, 0)):
        yield from kmono_range(*pair, max_degree)

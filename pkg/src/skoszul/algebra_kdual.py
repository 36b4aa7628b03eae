"""The Koszul dual curved dg-algebra K! and its small A-infinity companion.

Monomial normal forms per idempotent block:

    i0.K!.i0:  alternating word in {w, z} times an optional central theta
    i1.K!.i1:  alternating word in {f+, f-} times an optional theta
    i0.K!.i1:  the rank-8 bridge, kept in "s-form":
               s, s f+, s th, s f+ th, t, t f-, t th, t f- th
               (left-form aliases z.s, w.t, th.s, ... normalize into these)
    i1.K!.i0 = 0.

Relations: w^2 = z^2 = th^2 = (f+)^2 = (f-)^2 = 0, theta central,
w.s = z.t = s.f- = t.f+ = 0, z.s = s.f+, w.t = t.f-.
mu1(th) = wz + zw in idempotent 0 (and 0 in idempotent 1, which is forced
by the curved dg axioms); mu0 = f+f- + f-f+.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

W00 = ("w", "z")
W11 = ("f+", "f-")


@dataclass(frozen=True)
class DualMono:
    left: int
    right: int
    core: tuple[str, ...]  # theta-free part, in normal form
    theta: bool = False

    def __post_init__(self):
        lr = (self.left, self.right)
        if lr == (0, 0):
            _check_alternating(self.core, W00)
        elif lr == (1, 1):
            _check_alternating(self.core, W11)
        elif lr == (0, 1):
            if self.core not in (("s",), ("s", "f+"), ("t",), ("t", "f-")):
                raise ValueError(f"bad bridge core {self.core}")
        else:
            raise ValueError("i1.K!.i0 = 0")

    @property
    def is_unit(self) -> bool:
        return self.left == self.right and not self.core and not self.theta

    @property
    def length(self) -> int:
        return len(self.core) + (1 if self.theta else 0)

    def gr_alg(self) -> int:
        return -self.length

    def wt_theta(self) -> int:
        return 1 if self.theta else 0

    def __mul__(self, other: "DualMono"):
        if not isinstance(other, DualMono):
            return NotImplemented
        return _mul(self, other)

    def __str__(self) -> str:
        parts = list(self.core) + (["th"] if self.theta else [])
        if not parts:
            return f"i{self.left}"
        return ".".join(parts)


def _check_alternating(core, alphabet):
    for a, b in zip(core, core[1:]):
        if a == b:
            raise ValueError(f"doubled letter in {core}")
    for c in core:
        if c not in alphabet:
            raise ValueError(f"letter {c!r} outside {alphabet}")


def dunit(idem: int) -> DualMono:
    return DualMono(idem, idem, ())


def word00(core, theta=False) -> DualMono:
    return DualMono(0, 0, tuple(core), theta)


def word11(core, theta=False) -> DualMono:
    return DualMono(1, 1, tuple(core), theta)


def bridge(letter: str, phi: bool = False, theta: bool = False) -> DualMono:
    core = (letter, "f+" if letter == "s" else "f-") if phi else (letter,)
    return DualMono(0, 1, core, theta)


w = word00(("w",))
z = word00(("z",))
theta0 = word00((), True)
theta1 = word11((), True)
fplus = word11(("f+",))
fminus = word11(("f-",))
s = bridge("s")
t = bridge("t")

DZERO: frozenset = frozenset()


def _mul(a: DualMono, b: DualMono):
    if a.right != b.left:
        return None
    if a.theta and b.theta:
        return None  # th^2 = 0
    th = a.theta or b.theta
    la, lb = (a.left, a.right), (b.left, b.right)
    if la == lb and la in ((0, 0), (1, 1)):
        if a.core and b.core and a.core[-1] == b.core[0]:
            return None
        return DualMono(a.left, a.right, a.core + b.core, th)
    if la == (0, 0) and lb == (0, 1):
        # absorb a word into the bridge from the left, rightmost letter first
        letter, phi = b.core[0], len(b.core) == 2
        for c in reversed(a.core):
            if phi:
                return None
            if (c, letter) in (("z", "s"), ("w", "t")):
                phi = True
            else:
                return None  # w.s = z.t = 0
        return bridge(letter, phi, th)
    if la == (0, 1) and lb == (1, 1):
        letter, phi = a.core[0], len(a.core) == 2
        for c in b.core:
            if phi:
                return None  # s f+ f± = 0 and friends
            if (letter, c) in (("s", "f+"), ("t", "f-")):
                phi = True
            else:
                return None  # s.f- = t.f+ = 0
        return bridge(letter, phi, th)
    raise AssertionError("unreachable block pairing")


def delt(*monos: DualMono) -> frozenset:
    out = set()
    for m in monos:
        out ^= {m}
    return frozenset(out)


def _as_elt(a) -> frozenset:
    if isinstance(a, DualMono):
        return frozenset((a,))
    return a


def kdual_add(a, b) -> frozenset:
    return _as_elt(a) ^ _as_elt(b)


def kdual_mul(a, b) -> frozenset:
    out = set()
    for ma in _as_elt(a):
        for mb in _as_elt(b):
            m = ma * mb
            if m is not None:
                out ^= {m}
    return frozenset(out)


def kdual_mu1(a) -> frozenset:
    """Leibniz extension of mu1(th) = wz + zw; zero on every other letter.

    The theta of a bridge or i1 monomial contributes nothing: via the s-form
    the theta sits in idempotent 1, and both left-form aliases agree (the
    products w.z.(zs) etc. all die).
    """
    out = set()
    for m in _as_elt(a):
        if (m.left, m.right) == (0, 0) and m.theta:
            stripped = DualMono(0, 0, m.core, False)
            for duo in (word00(("w", "z")), word00(("z", "w"))):
                p = stripped * duo
                if p is not None:
                    out ^= {p}
    return frozenset(out)


def kdual_mu0() -> frozenset:
    return delt(word11(("f+", "f-")), word11(("f-", "f+")))


def gr_alg(m: DualMono) -> int:
    return m.gr_alg()


def wt_theta(a) -> int:
    if isinstance(a, DualMono):
        return a.wt_theta()
    return sum(m.wt_theta() for m in a)


_LETTER_MONOS = {
    "w": (w,),
    "z": (z,),
    "s": (s,),
    "t": (t,),
    "f+": (fplus,),
    "f-": (fminus,),
    "th": (theta0, theta1),
}


def parse_dualelt(text: str, left: int | None = None, right: int | None = None) -> frozenset:
    text = text.strip()
    if text == "0":
        return DZERO
    out = set()
    # sums need spaces around '+' since f+/f- are letters
    for term in text.split(" + "):
        out ^= set(_parse_mono(term.strip(), left, right))
    return frozenset(out)


def _parse_mono(term: str, left, right):
    if term in ("i0", "i1"):
        e = int(term[1])
        if left not in (None, e) or right not in (None, e):
            raise ValueError(f"unit {term} conflicts with idempotent hint")
        return [dunit(e)]
    letters = term.split(".")
    for l in letters:
        if l not in _LETTER_MONOS:
            raise ValueError(f"bad K! letter {l!r} in {term!r}")
    # products over all theta-idempotent choices; relations normalize for us
    results = set()
    for choice in product(*(_LETTER_MONOS[l] for l in letters)):
        if left is not None and choice[0].left != left:
            continue
        if right is not None and choice[-1].right != right:
            continue
        acc = choice[0]
        for m in choice[1:]:
            acc = acc * m
            if acc is None:
                break
        if acc is not None:
            results.add(acc)
    if len(results) > 1:
        raise ValueError(f"{term!r} is idempotent-ambiguous; pass a hint")
    return list(results)


def parse_dualmono(text: str, left: int | None = None, right: int | None = None) -> DualMono:
    elt = parse_dualelt(text, left, right)
    if len(elt) != 1:
        raise ValueError(f"{text!r} is not a single monomial (got {format_dualelt(elt)})")
    return next(iter(elt))


def format_dualelt(a) -> str:
    monos = _as_elt(a)
    if not monos:
        return "0"
    return " + ".join(sorted(str(m) for m in monos))


def dualmono_range(left: int, right: int, max_length: int):
    """All normal-form monomials of the block with letter count <= max_length."""
    if (left, right) == (1, 0):
        return
    if (left, right) == (0, 1):
        for letter in ("s", "t"):
            for phi in (False, True):
                for th in (False, True):
                    m = bridge(letter, phi, th)
                    if m.length <= max_length:
                        yield m
        return
    alphabet = W00 if left == 0 else W11
    for th in (False, True):
        budget = max_length - (1 if th else 0)
        if budget < 0:
            continue
        yield DualMono(left, right, (), th)
        for start in alphabet:
            for n in range(1, budget + 1):
                core = tuple(alphabet[(alphabet.index(start) + k) % 2] for k in range(n))
                yield DualMono(left, right, core, th)


def all_dualmonos(max_length: int):
    for pair in ((0, 0), (1, 1), (0, 1)):
        yield from dualmono_range(*pair, max_length)


# ---------------------------------------------------------------------------
# The A-infinity companion: exterior-algebra idempotent-0 part, mu3, and the
# strong deformation retraction connecting it to K!.

V_INF = word00(("w", "z"))  # the single length-2 class in the small model


def is_inf_monomial(m: DualMono) -> bool:
    if (m.left, m.right) == (0, 0):
        return not m.theta and len(m.core) <= 2 and m.core != ("z", "w")
    return True


def sdr_incl(m: DualMono) -> DualMono:
    """Section of the projection; sends the length-2 class to zw."""
    if not is_inf_monomial(m):
        raise ValueError(f"{m} is not a small-model monomial")
    if m == V_INF:
        return word00(("z", "w"))
    return m


def sdr_proj(m: DualMono) -> DualMono | None:
    if (m.left, m.right) != (0, 0):
        return m
    if m.theta or len(m.core) > 2:
        return None
    if len(m.core) == 2:
        return V_INF
    return m


def sdr_h(m: DualMono) -> DualMono | None:
    """Splitting homotopy: drop the last two letters of an idempotent-0 word
    and append theta, except on zw, theta-multiples, and short words."""
    if (m.left, m.right) != (0, 0) or m.theta or len(m.core) < 2:
        return None
    if m.core == ("z", "w"):
        return None
    return word00(m.core[:-2], True)


def _set(m):
    return frozenset() if m is None else frozenset((m,))


def _map_elt(f, a):
    out = set()
    for m in _as_elt(a):
        r = f(m)
        if r is not None:
            out ^= {r}
    return frozenset(out)


def inf_mul(a: DualMono, b: DualMono) -> frozenset:
    """Transferred binary product on the small model."""
    prod = kdual_mul(sdr_incl(a), sdr_incl(b))
    return _map_elt(sdr_proj, prod)


def transferred_mu(inputs: tuple[DualMono, ...]) -> frozenset:
    """Transferred mu_n via the sum over planar binary trees with the
    homotopy on internal edges.  Exact; used to certify mu3 and the
    vanishing of mu4..mu6."""
    n = len(inputs)
    if n < 2:
        raise ValueError("transferred_mu needs >= 2 inputs")
    leaves = [frozenset((sdr_incl(x),)) for x in inputs]

    memo: dict = {}

    def q(i, j):  # sum over splits of inputs[i:j], living in K!
        if (i, j) in memo:
            return memo[i, j]
        out = frozenset()
        for k in range(i + 1, j):
            for ma in p(i, k):
                for mb in p(k, j):
                    r = ma * mb
                    if r is not None:
                        out ^= {r}
        memo[i, j] = out
        return out

    def p(i, j):  # leaf inclusion or homotopy of an inner product
        if j - i == 1:
            return leaves[i]
        return _map_elt(sdr_h, q(i, j))

    return _map_elt(sdr_proj, q(0, n))


def kdualinf_mu3(a: DualMono, b: DualMono, c: DualMono) -> frozenset:
    """mu3 of the small model.  Computed from the retraction, which is the
    defining recipe; nonzero exactly on (a.w, z, s.b)/(a.w, z, t.b) shapes
    plus the one further value mu3(w, wz, t.b) the associativity relations
    force."""
    ia, ib, ic = sdr_incl(a), sdr_incl(b), sdr_incl(c)
    out = set()
    ab = ia * ib
    if ab is not None:
        h = sdr_h(ab)
        if h is not None:
            r = h * ic
            if r is not None:
                p = sdr_proj(r)
                if p is not None:
                    out ^= {p}
    bc = ib * ic
    if bc is not None:
        h = sdr_h(bc)
        if h is not None:
            r = ia * h
            if r is not None:
                p = sdr_proj(r)
                if p is not None:
                    out ^= {p}
    return frozenset(out)


def inf_monomial_range(max_length: int):
    for m in all_dualmonos(max_length):
        if is_inf_monomial(m):
            yield m

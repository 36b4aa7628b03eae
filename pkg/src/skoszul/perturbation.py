"""The big AA-bimodule L (a K-monomial paired with a dual K!-monomial), its
strong deformation retraction onto the idempotent ring, and the perturbation
engine that evaluates the trace actions.

A state x|y* pairs x in K with y in K!, subject to right(x) = right(y); the
bimodule idempotents are (left(x), left(y)).  K acts by left multiplication
on x; K! acts on the right by left division of y.  The differential is the
sum of the ten cotrace strips (right-divide y, right-multiply x) and the
dual of mu1.

The contraction data d, H are transcriptions of the per-idempotent ladder
diagrams.  The projections written W^{>=0} etc. select the W-surplus part of
a polynomial monomial (W^a Z^b with a >= b); anything weaker breaks d^2 = 0,
and sdr_verify checks all five retraction identities exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

from . import algebra_k as ak
from . import algebra_kdual as kd
from .algebra_k import KMono
from .algebra_kdual import DualMono


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LState:
    x: KMono
    y: DualMono

    def __post_init__(self):
        if self.x.right != self.y.right:
            raise ValueError(f"middle idempotent mismatch: {self.x} | {self.y}")

    @property
    def idems(self):
        return (self.x.left, self.y.left)

    def __str__(self):
        return f"{self.x}|({self.y})*"


def _st(x, y):
    return LState(x, y)


# the ten cotrace arrows, as (dual letter, K coefficient) pairs
COTRACE_PAIRS = (
    (kd.w, ak.W),
    (kd.z, ak.Z),
    (kd.theta0, ak.U0),
    (kd.s, ak.sigma),
    (kd.t, ak.tau),
    (kd.fplus, ak.T),
    (kd.fminus, ak.Tinv),
    (kd.theta1, ak.U1),
)


@lru_cache(maxsize=None)
def left_divisors(b: DualMono, y: DualMono) -> tuple:
    """All monomials y' with b * y' = y."""
    n = y.length - b.length
    if n < 0 or b.right not in (0, 1):
        return ()
    out = []
    for cand in kd.dualmono_range(b.right, y.right, n):
        if cand.length == n and b * cand == y:
            out.append(cand)
    return tuple(out)


@lru_cache(maxsize=None)
def right_divisors(y: DualMono, b: DualMono) -> tuple:
    """All monomials y' with y' * b = y."""
    n = y.length - b.length
    if n < 0:
        return ()
    out = []
    for cand in kd.dualmono_range(y.left, b.left, n):
        if cand.length == n and cand * b == y:
            out.append(cand)
    return tuple(out)


def l_left_act(a: KMono, state: LState) -> frozenset:
    x = a * state.x
    if x is None:
        return frozenset()
    return frozenset((_st(x, state.y),))


def l_right_act(state: LState, b: DualMono) -> frozenset:
    return frozenset(_st(state.x, yp) for yp in left_divisors(b, state.y))


@lru_cache(maxsize=None)
def alpha_mu1(state: LState) -> frozenset:
    """Dual of mu1: all y'' whose differential contains y."""
    y = state.y
    if (y.left, y.right) != (0, 0) or y.theta or len(y.core) < 2:
        return frozenset()
    out = set()
    for cand in kd.dualmono_range(0, 0, y.length - 1):
        if cand.length == y.length - 1 and y in kd.kdual_mu1(cand):
            out.add(_st(state.x, cand))
    return frozenset(out)


@lru_cache(maxsize=None)
def l_diff(state: LState) -> frozenset:
    """The full differential m_{0|1|0}: cotrace strips plus the mu1 dual."""
    out = set()
    for b, a in COTRACE_PAIRS:
        xa = state.x * a
        if xa is None:
            continue
        for yp in right_divisors(state.y, b):
            out ^= {_st(xa, yp)}
    out ^= alpha_mu1(state)
    return frozenset(out)


# ---------------------------------------------------------------------------
# the contraction: d, H, Pi, I


@lru_cache(maxsize=None)
def sdr_d(state: LState) -> frozenset:
    x, y = state.x, state.y
    out = set()
    if (y.left, y.right) == (0, 0):
        core = y.core
        if x.left == 0:
            a, b = x.e1, x.e2
            if core and core[-1] == "w" and a >= b:
                out.add(_st(x * ak.W, kd.word00(core[:-1], y.theta)))
            if core and core[-1] == "z" and b >= a:
                out.add(_st(x * ak.Z, kd.word00(core[:-1], y.theta)))
            if not core and y.theta and a == b:
                out.add(_st(x * ak.U0, kd.dunit(0)))
        elif x.letter == ak.SIGMA:
            if len(core) >= 2 and core[-1] == "z":
                out.add(_st(x * ak.Z, kd.word00(core[:-1], y.theta)))
        else:  # tau column
            if len(core) >= 2 and core[-1] == "w":
                out.add(_st(x * ak.W, kd.word00(core[:-1], y.theta)))
    elif (y.left, y.right) == (0, 1):
        letter = y.core[0]
        phi = len(y.core) == 2
        if letter == "s":
            out.add(_st(x * ak.sigma, kd.word00(("z",) if phi else (), y.theta)))
        else:
            out.add(_st(x * ak.tau, kd.word00(("w",) if phi else (), y.theta)))
    else:  # (1, 1)
        core = y.core
        if y.theta:
            out.add(_st(x * ak.U1, kd.word11(core, False)))
        if core and core[-1] == "f+" and x.e2 >= 0:
            out.add(_st(x * ak.T, kd.word11(core[:-1], y.theta)))
        if core and core[-1] == "f-" and x.e2 <= 0:
            out.add(_st(x * ak.Tinv, kd.word11(core[:-1], y.theta)))
    return frozenset(out)


@lru_cache(maxsize=None)
def sdr_h(state: LState) -> frozenset:
    x, y = state.x, state.y
    out = set()
    if (y.left, y.right) == (0, 0):
        core = y.core
        if x.left == 0:
            a, b = x.e1, x.e2
            if (not core or core[-1] == "z") and a > b:
                out.add(_st(ak.wz(a - 1, b), kd.word00(core + ("w",), y.theta)))
            if (not core or core[-1] == "w") and b > a:
                out.add(_st(ak.wz(a, b - 1), kd.word00(core + ("z",), y.theta)))
            if not core and not y.theta and a == b > 0:
                out.add(_st(ak.wz(a - 1, b - 1), kd.theta0))
        elif x.letter == ak.SIGMA:
            if core and core[-1] == "w":
                out.add(_st(ak.arrow(ak.SIGMA, x.e1, x.e2 - 1),
                            kd.word00(core + ("z",), y.theta)))
            if core in ((), ("z",)):
                out.add(_st(ak.ut(x.e1, x.e2),
                            kd.bridge("s", phi=core == ("z",), theta=y.theta)))
        else:
            if core and core[-1] == "z":
                out.add(_st(ak.arrow(ak.TAU, x.e1, x.e2 + 1),
                            kd.word00(core + ("w",), y.theta)))
            if core in ((), ("w",)):
                out.add(_st(ak.ut(x.e1, x.e2),
                            kd.bridge("t", phi=core == ("w",), theta=y.theta)))
    elif (y.left, y.right) == (1, 1):
        core = y.core
        a, b = x.e1, x.e2
        if (not core or core[-1] == "f-") and b > 0:
            out.add(_st(ak.ut(a, b - 1), kd.word11(core + ("f+",), y.theta)))
        if (not core or core[-1] == "f+") and b < 0:
            out.add(_st(ak.ut(a, b + 1), kd.word11(core + ("f-",), y.theta)))
        if not core and not y.theta and a > 0 and b == 0:
            out.add(_st(ak.ut(a - 1, 0), kd.theta1))
    # bridge states: H = 0
    return frozenset(out)


def sdr_pi(state: LState):
    """Nonzero exactly on the two unit states; value is the idempotent."""
    if state.x.is_unit and state.y.is_unit:
        return state.y.left
    return None


def sdr_i(idem: int) -> LState:
    return _st(ak.unit(idem), kd.dunit(idem))


def alpha0(state: LState) -> frozenset:
    return l_diff(state) ^ sdr_d(state)


def alpha_mu2(state: LState) -> frozenset:
    """Cotrace-strip terms not absorbed into d."""
    return alpha0(state) ^ alpha_mu1(state)


# ---------------------------------------------------------------------------
# state enumeration and verification of the retraction identities


def lstate_range(deg_cap: int, len_cap: int):
    blocks = [((0, 0), (0, 0)), ((1, 1), (1, 1)), ((1, 0), (0, 0)), ((1, 1), (0, 1))]
    for (xl, xr), (yl, yr) in blocks:
        xs = list(ak.kmono_range(xl, xr, deg_cap))
        ys = [y for y in kd.dualmono_range(yl, yr, len_cap)]
        for x in xs:
            for y in ys:
                yield _st(x, y)


def _apply(fn, states) -> frozenset:
    out = set()
    for s in states:
        out ^= fn(s)
    return frozenset(out)


def sdr_verify(deg_cap: int = 6, len_cap: int = 6):
    """The five retraction identities plus d^2 = 0, Pi d = 0, d I = 0, and
    the decomposition self-test d + alpha0 = full differential."""
    from .structures import Report

    rep = Report(f"L contraction identities (deg<={deg_cap}, len<={len_cap})")
    for e in (0, 1):
        rep.checked += 1
        if sdr_pi(sdr_i(e)) != e:
            rep.fail(f"Pi I != id at i{e}")
        rep.checked += 1
        if sdr_h(sdr_i(e)):
            rep.fail(f"H I != 0 at i{e}")
    for st in lstate_range(deg_cap, len_cap):
        lhs = frozenset((st,)) ^ (frozenset((sdr_i(sdr_pi(st)),))
                                  if sdr_pi(st) is not None else frozenset())
        rhs = _apply(sdr_d, sdr_h(st)) ^ _apply(sdr_h, sdr_d(st))
        rep.checked += 4
        if lhs != rhs:
            rep.fail(f"id + I Pi != dH + Hd at {st}")
        if _apply(sdr_h, sdr_h(st)):
            rep.fail(f"H^2 != 0 at {st}")
        if any(sdr_pi(t) is not None for t in sdr_h(st)):
            rep.fail(f"Pi H != 0 at {st}")
        if _apply(sdr_d, sdr_d(st)):
            rep.fail(f"d^2 != 0 at {st}")
        if any(sdr_pi(t) is not None for t in sdr_d(st)):
            rep.fail(f"Pi d != 0 at {st}")
        if sdr_d(st) ^ alpha0(st) != l_diff(st):
            rep.fail(f"d + alpha0 != m_0|1|0 at {st}")
    return rep


# ---------------------------------------------------------------------------
# the perturbation engine


@dataclass(frozen=True)
class TraceConfig:
    max_delta: int = 12          # module-side delta paths in fused products
    step_factor: int = 3         # alpha-step cap = step_factor*(k+n) + step_pad
    step_pad: int = 3
    prune_by_grading: bool = True


DEFAULT_CONFIG = TraceConfig()


def _is_unit_k(m: KMono) -> bool:
    return m.is_unit


def trace_action(aseq, bseq, cfg: TraceConfig = DEFAULT_CONFIG) -> frozenset:
    """m_{k|1|n}(a_k, .., a_1, 1, b_1, .., b_n) on the trace bimodule;
    sequences are innermost-first.  Returns the set of idempotents carrying
    the answer (empty = 0)."""
    aseq, bseq = tuple(aseq), tuple(bseq)
    units_a = [m for m in aseq if m.is_unit]
    units_b = [m for m in bseq if m.is_unit]
    if units_a or units_b:
        # strict unitality: only the two binary unit actions survive
        if len(aseq) + len(bseq) == 1:
            u = (aseq + bseq)[0]
            return frozenset((u.left,))
        return frozenset()
    return _trace_cached(aseq, bseq, cfg)


@lru_cache(maxsize=None)
def _trace_cached(aseq, bseq, cfg) -> frozenset:
    k, n = len(aseq), len(bseq)
    starts = set()
    for e in (0, 1):
        if aseq and aseq[0].right != e:
            continue
        if bseq and bseq[0].left != e:
            continue
        starts.add(e)
    out = set()
    budget = k - 1 if cfg.prune_by_grading else None
    cap = cfg.step_factor * (k + n) + cfg.step_pad
    for e in sorted(starts):
        live = {(sdr_i(e), 0, 0)}
        for _ in range(cap + 1):
            after_alpha = set()
            for st, i, j in live:
                if i < k:
                    for t in l_left_act(aseq[i], st):
                        after_alpha ^= {(t, i + 1, j)}
                if j < n:
                    used = sum(bseq[l].length - 1 for l in range(j))
                    if budget is None or used + bseq[j].length - 1 <= budget:
                        for t in l_right_act(st, bseq[j]):
                            after_alpha ^= {(t, i, j + 1)}
                for t in alpha0(st):
                    after_alpha ^= {(t, i, j)}
            for st, i, j in after_alpha:
                if i == k and j == n:
                    p = sdr_pi(st)
                    if p is not None:
                        out ^= {p}
            live = set()
            for st, i, j in after_alpha:
                for t in sdr_h(st):
                    live ^= {(t, i, j)}
            if not live:
                break
        else:
            raise CapExceeded(
                f"trace action {tuple(map(str, aseq))};{tuple(map(str, bseq))} "
                f"still live after {cap} steps")
    return frozenset(out)


def trace_paths(aseq, bseq, cfg: TraceConfig = DEFAULT_CONFIG):
    """Full path enumeration (no cancellation): each contributing path is a
    list of (step label, state) pairs ending at the projection."""
    aseq, bseq = tuple(aseq), tuple(bseq)
    k, n = len(aseq), len(bseq)
    cap = cfg.step_factor * (k + n) + cfg.step_pad
    done = []

    def rec(st, i, j, steps, path):
        if steps > cap:
            raise CapExceeded("path enumeration exhausted the step cap")
        branches = []
        if i < k:
            for t in l_left_act(aseq[i], st):
                branches.append((f"{aseq[i]}.", t, i + 1, j))
        if j < n:
            for t in l_right_act(st, bseq[j]):
                branches.append((f".{bseq[j]}", t, i, j + 1))
        for t in alpha0(st):
            branches.append(("alpha0", t, i, j))
        for label, t, i2, j2 in branches:
            entry = (label, t)
            if i2 == k and j2 == n and sdr_pi(t) is not None:
                done.append(path + [entry, ("Pi", f"i{sdr_pi(t)}")])
            for h in sdr_h(t):
                rec(h, i2, j2, steps + 1, path + [entry, ("H", h)])

    for e in (0, 1):
        if aseq and aseq[0].right != e:
            continue
        if bseq and bseq[0].left != e:
            continue
        start = sdr_i(e)
        rec(start, 0, 0, 0, [("I", start)])
    return done


def trace_box_action(aseq, supply, start_token, start_idem,
                     rider_unit=None, cfg: TraceConfig = DEFAULT_CONFIG) -> frozenset:
    """Fused evaluation of the trace against a type-D/DD supply of right
    inputs.

    supply(token) yields (b monomial, next token, K coefficient or None);
    unit b's must not be supplied (they belong to the internal differential
    of the box product, not to the trace actions).  Returns pairs
    (final token, accumulated K coefficient) -- the coefficient slot is the
    rider_unit argument threaded through reversed multiplication, or None.
    """
    aseq = tuple(aseq)
    k = len(aseq)
    if any(m.is_unit for m in aseq):
        if k == 1:
            return frozenset(((start_token, rider_unit),)) \
                if aseq[0].left == start_idem else frozenset()
        return frozenset()
    if aseq and aseq[0].right != start_idem:
        return frozenset()
    out = set()
    budget = k - 1 if cfg.prune_by_grading else None
    cap = cfg.step_factor * (k + cfg.max_delta) + cfg.step_pad
    live = {(sdr_i(start_idem), 0, start_token, rider_unit, 0)}
    for _ in range(cap + 1):
        after_alpha = set()
        for st, i, tok, rider, used in live:
            if i < k:
                for t in l_left_act(aseq[i], st):
                    after_alpha ^= {(t, i + 1, tok, rider, used)}
            for b, tok2, c in supply(tok):
                cost = b.length - 1
                if budget is not None and used + cost > budget:
                    continue
                rider2 = rider
                if c is not None and rider is not None:
                    rider2 = c * rider
                    if rider2 is None:
                        continue
                for t in l_right_act(st, b):
                    after_alpha ^= {(t, i, tok2, rider2, used + cost)}
            for t in alpha0(st):
                after_alpha ^= {(t, i, tok, rider, used)}
        for st, i, tok, rider, used in after_alpha:
            if i == k and sdr_pi(st) is not None:
                out ^= {(tok, rider)}
        live = set()
        for st, i, tok, rider, used in after_alpha:
            for t in sdr_h(st):
                live ^= {(t, i, tok, rider, used)}
        if not live:
            break
    else:
        raise CapExceeded(
            f"fused trace action on {tuple(map(str, aseq))} from {start_token} "
            f"still live after {cap} steps; raise max_delta/step caps")
    return frozenset(out)


# ---------------------------------------------------------------------------
# generic twisted-contraction sums (the four explicit series)


class TwistedSDR:
    """Path sums Pi~, I~, H~, beta for a contraction twisted by alpha.

    All maps are state -> frozenset of states, except pi (state -> label or
    None) and incl (label -> state).  The alpha-H chain must be nilpotent
    within `cap` steps on every input in range.
    """

    def __init__(self, d, h, pi, incl, alpha, cap: int = 24):
        self.d, self.h, self.pi, self.incl, self.alpha = d, h, pi, incl, alpha
        self.cap = cap

    def _chase(self, seed: frozenset, first: str):
        """Alternating alpha/h orbit starting with `first`; yields the layer
        after every alpha and after every h."""
        live = seed
        for _ in range(self.cap):
            if not live:
                return
            if first == "alpha":
                live = _apply(self.alpha, live)
                yield "alpha", live
                live = _apply(self.h, live)
                yield "h", live
            else:
                live = _apply(self.h, live)
                yield "h", live
                live = _apply(self.alpha, live)
                yield "alpha", live
        if live:
            raise CapExceeded("twist chain is not nilpotent within the cap")

    def twisted_pi(self, state) -> frozenset:
        out = set()
        p = self.pi(state)
        if p is not None:
            out ^= {p}
        live = frozenset((state,))
        for kind, layer in self._chase(live, "h"):
            if kind == "alpha":
                for s in layer:
                    p = self.pi(s)
                    if p is not None:
                        out ^= {p}
        return frozenset(out)

    def twisted_i(self, label) -> frozenset:
        out = set()
        live = frozenset((self.incl(label),))
        out ^= live
        for kind, layer in self._chase(live, "alpha"):
            if kind == "h":
                out ^= layer
        return frozenset(out)

    def twisted_h(self, state) -> frozenset:
        out = _apply(self.h, frozenset((state,)))
        live = out
        for kind, layer in self._chase(live, "alpha"):
            if kind == "h":
                out ^= layer
        return frozenset(out)

    def beta(self, label) -> frozenset:
        """The twisted differential on the retract, as a set of labels."""
        out = set()
        live = frozenset((self.incl(label),))
        for kind, layer in self._chase(live, "alpha"):
            if kind == "alpha":
                for s in layer:
                    p = self.pi(s)
                    if p is not None:
                        out ^= {p}
        return frozenset(out)


def l_twisted_sdr(cap: int = 24) -> TwistedSDR:
    return TwistedSDR(sdr_d, sdr_h, sdr_pi, sdr_i, alpha0, cap)

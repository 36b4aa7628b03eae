"""The cotrace DD-bimodule, the trace AA-bimodule, verification that their
box tensor products are the identity bimodules, and the dualization functors
on modules and bimodules."""

from __future__ import annotations

from . import algebra_k as ak
from . import algebra_kdual as kd
from .boxtensor import (TraceBoxDA, TraceBoxTypeA, box_co_da, box_co_type_a,
                        dd_paths)
from .perturbation import (COTRACE_PAIRS, DEFAULT_CONFIG, TraceConfig,
                           trace_action)
from .structures import (AAEval, DAEval, DDStruct, DStruct, Gen, Report,
                         SideMismatch, TypeAEval, K_OPS, KDUAL_OPS,
                         monomial_sequences)


def cotrace() -> DDStruct:
    """The rank-one dualizing DD-bimodule over (K!, K): ten arrows on the
    two idempotent generators."""
    gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
    arrows = [(f"i{b.left}", f"i{b.right}", b, a) for b, a in COTRACE_PAIRS]
    return DDStruct(gens, arrows)


class TraceAA(AAEval):
    """The trace bimodule over (K, K!), backed by the perturbation engine."""

    def __init__(self, cfg: TraceConfig = DEFAULT_CONFIG):
        self.algebra_left = K_OPS
        self.algebra_right = KDUAL_OPS
        self.gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
        self.cfg = cfg

    def act(self, x, aseq, bseq):
        aseq, bseq = tuple(aseq), tuple(bseq)
        e = self.gens[x].left
        if aseq and aseq[0].right != e:
            return frozenset()
        if bseq and bseq[0].left != e:
            return frozenset()
        if not aseq and not bseq:
            return frozenset()
        return frozenset(f"i{i}" for i in trace_action(aseq, bseq, self.cfg))


class CoTraceDA(DAEval):
    """cotrace (x) trace as a DA bimodule over (K!, K!): the right inputs
    feed the trace while the coaction paths of the cotrace provide the
    K-side inputs and the output coefficient.

    Nonzero actions satisfy j + n - 1 + sum gr_alg(b_i) = 0, so coaction
    paths are enumerated to that depth (plus `slack` extra layers, asserted
    to contribute nothing)."""

    def __init__(self, cfg: TraceConfig = DEFAULT_CONFIG, slack: int = 1):
        self.algebra_in = KDUAL_OPS
        self.algebra_out = KDUAL_OPS
        self.gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
        self.cfg = cfg
        self.slack = slack
        self.co = cotrace()
        self.bound = None

    def act(self, x, bseq):
        bseq = tuple(bseq)
        e = self.gens[x].right
        if any(b.is_unit for b in bseq):
            if len(bseq) == 1 and bseq[0].left == e:
                return frozenset(((x, kd.dunit(e)),))
            return frozenset()
        if bseq and bseq[0].left != e:
            return frozenset()
        if not bseq:
            return frozenset()
        j = len(bseq)
        nmax = 1 - j + sum(b.length for b in bseq)
        out = set()
        for n in range(1, max(0, nmax) + 1 + self.slack):
            for bprod, apath, end in dd_paths(self.co, x, n):
                if trace_action(apath, bseq, self.cfg):
                    if n > nmax:
                        raise AssertionError(
                            "algebraic-grading balance violated in co(x)trace")
                    out ^= {(end, bprod)}
        return frozenset(out)


def trace_box_co(cfg: TraceConfig = DEFAULT_CONFIG) -> TraceBoxDA:
    """trace (x) cotrace as a DA bimodule over (K, K)."""
    return TraceBoxDA(cotrace(), cfg)


def verify_tr_co_identity(max_deg: int = 4, max_len: int = 3,
                          cfg: TraceConfig = DEFAULT_CONFIG,
                          witness=None) -> Report:
    """trace (x) cotrace equals the identity DA bimodule over (K, K):
    delta_2(a, i) = i' (x) a for every monomial of degree <= max_deg, and
    delta_{j+1} = 0 for j != 1 over sequences of length <= max_len with
    total degree <= max_deg."""
    rep = Report(f"trace (x) cotrace = identity (deg<={max_deg}, len<={max_len})")
    M = trace_box_co(cfg)
    for e in (0, 1):
        rep.checked += 1
        if M.act(f"i{e}", ()):
            rep.fail(f"delta_1(i{e}) != 0")
    for pair in ((0, 0), (1, 1), (1, 0)):
        for a in ak.kmono_range(*pair, max_deg):
            got = M.act(f"i{a.right}", (a,))
            want = frozenset(((f"i{a.left}", a),))
            rep.checked += 1
            if got != want:
                rep.fail(f"delta_2({a}, i{a.right}) = "
                         f"{sorted((y, str(c)) for y, c in got)}, expected i{a.left} (x) {a}")
            elif witness is not None:
                witness((a,))
    for e in (0, 1):
        for k in range(2, max_len + 1):
            for seq in monomial_sequences(K_OPS, k, max_deg, start_idem=e,
                                          total_cap=max_deg):
                got = M.act(f"i{e}", seq)
                rep.checked += 1
                if got:
                    rep.fail(f"delta_{k + 1}({', '.join(map(str, seq))}, i{e}) = "
                             f"{sorted((y, str(c)) for y, c in got)} != 0")
    return rep


def verify_co_tr_identity(max_len: int = 4, max_seq: int = 3,
                          cfg: TraceConfig = DEFAULT_CONFIG,
                          total_cap: int | None = None) -> Report:
    """cotrace (x) trace equals the identity DA bimodule over K!:
    delta_2(i, b) = b (x) i' for every monomial of length <= max_len, and
    delta_{j+1} = 0 for j != 1 over sequences of length <= max_seq."""
    rep = Report(f"cotrace (x) trace = identity (len<={max_len}, seq<={max_seq})")
    M = CoTraceDA(cfg)
    cap = total_cap if total_cap is not None else max_len
    for e in (0, 1):
        rep.checked += 1
        if M.act(f"i{e}", ()):
            rep.fail(f"delta_1(i{e}) != 0")
    for pair in ((0, 0), (1, 1), (0, 1)):
        for b in kd.dualmono_range(*pair, max_len):
            got = M.act(f"i{b.left}", (b,))
            want = frozenset(((f"i{b.right}", b),))
            rep.checked += 1
            if got != want:
                rep.fail(f"delta_2(i{b.left}, {b}) = "
                         f"{sorted((y, str(c)) for y, c in got)}, expected {b} (x) i{b.right}")
    for e in (0, 1):
        for j in range(2, max_seq + 1):
            for bseq in monomial_sequences(KDUAL_OPS, j, max_len, start_idem=e,
                                           side="right", total_cap=cap):
                got = M.act(f"i{e}", bseq)
                rep.checked += 1
                if got:
                    rep.fail(f"delta_{j + 1}(i{e}, {', '.join(map(str, bseq))}) = "
                             f"{sorted((y, str(c)) for y, c in got)} != 0")
    return rep


def factorization_scan(b: kd.DualMono, cfg: TraceConfig = DEFAULT_CONFIG):
    """All coaction paths of the cotrace whose dual product equals b,
    together with the trace value on the resulting K-side sequence.
    Realizes the by-hand computation of delta_2(i, b) one configuration at
    a time."""
    n = b.length
    out = []
    for bprod, apath, end in dd_paths(cotrace(), f"i{b.left}", n):
        if bprod == b:
            out.append((apath, trace_action(apath, (b,), cfg), end))
    return out


def dualize(M, cfg: TraceConfig = DEFAULT_CONFIG):
    """cotrace (x) M: a bounded type-A module over K becomes a left type-D
    structure over K!; a bounded DA bimodule over (K, K) becomes a DD
    structure over (K!, K)."""
    if isinstance(M, TypeAEval):
        if M.algebra is not K_OPS:
            raise SideMismatch("dualize expects a module over K")
        return box_co_type_a(cotrace(), M, cfg)
    if isinstance(M, DAEval):
        if M.algebra_in is not K_OPS:
            raise SideMismatch("dualize expects K-side inputs")
        return box_co_da(cotrace(), M, cfg)
    raise SideMismatch(f"cannot dualize {type(M).__name__}")


def undualize(N, cfg: TraceConfig = DEFAULT_CONFIG):
    """trace (x) N: type-D structures over K! become A-infinity modules over
    K; DD structures over (K!, K) become DA bimodules over (K, K)."""
    if isinstance(N, DStruct):
        return TraceBoxTypeA(N, cfg)
    if isinstance(N, DDStruct):
        return TraceBoxDA(N, cfg)
    raise SideMismatch(f"cannot undualize {type(N).__name__}")


def roundtrip_dd_check(N: DDStruct, cfg: TraceConfig = DEFAULT_CONFIG,
                       src_gens=None) -> Report:
    """dualize(undualize(N)) = N, arrow for arrow, on the listed source
    generators (all of them by default)."""
    rep = Report("DD round trip")
    back = box_co_da(cotrace(), TraceBoxDA(N, cfg), cfg)
    keep = set(src_gens) if src_gens is not None else set(N.gens)
    want = {t for t in N.arrows if t[0] in keep}
    got = {t for t in back.arrows if t[0] in keep}
    rep.checked += len(keep)
    for t in sorted(want - got, key=str):
        rep.fail(f"missing arrow {t[0]} -> {t[1]} {t[2]}|{t[3]}")
    for t in sorted(got - want, key=str):
        rep.fail(f"extra arrow {t[0]} -> {t[1]} {t[2]}|{t[3]}")
    return rep


class IdentityTypeA(TypeAEval):
    """The rank-two module on the idempotent ring: every monomial acts by
    its target idempotent, higher actions vanish."""

    def __init__(self):
        self.algebra = K_OPS
        self.gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
        self.bound = 1

    def act(self, x, aseq):
        if len(aseq) != 1 or aseq[0].right != self.gens[x].idem:
            return frozenset()
        return frozenset((f"i{aseq[0].left}",))

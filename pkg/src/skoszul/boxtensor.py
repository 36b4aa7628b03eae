"""Box tensor products pairing a D-side output with an A-side input.

The supported pairings are exactly the ones the duality computations need:
cotrace (x) type-A, cotrace (x) DA, DA (x) cotrace, and trace (x) D / DD
(the latter two are evaluators driven by the perturbation engine).

Iterated coaction supplies are enumerated with explicit caps; exhausting a
cap with live contributions raises instead of truncating silently.
"""

from __future__ import annotations

from . import algebra_k as ak
from .perturbation import DEFAULT_CONFIG, TraceConfig, trace_box_action
from .structures import (DAEval, DDStruct, DStruct, Gen, NonTermination,
                         TypeAEval, K_OPS, KDUAL_OPS, cobonsai_scan)


def dd_paths(dd: DDStruct, start_gen: str, n: int):
    """All arrow paths of length n from start_gen, pruned when the ordered
    product of the dual-side coefficients dies.  Yields
    (dual product, K coefficients innermost-first, end gen)."""
    out = []

    def rec(gen, bprod, apath, depth):
        if depth == n:
            out.append((bprod, tuple(apath), gen))
            return
        for b, dst, a in dd.delta1(gen):
            nb = b if bprod is None else bprod * b
            if nb is None and bprod is not None:
                continue
            apath.append(a)
            rec(dst, nb, apath, depth + 1)
            apath.pop()

    rec(start_gen, None, [], 0)
    return out


def dd_paths_rev(dd: DDStruct, start_gen: str, n: int):
    """Paths of length n accumulating the reversed K-side product instead;
    yields (dual coefficients in path order, K product, end gen)."""
    out = []

    def rec(gen, bpath, aprod, depth):
        if depth == n:
            out.append((tuple(bpath), aprod, gen))
            return
        for b, dst, a in dd.delta1(gen):
            na = a if aprod is None else a * aprod
            if na is None and aprod is not None:
                continue
            bpath.append(b)
            rec(dst, bpath, na, depth + 1)
            bpath.pop()

    rec(start_gen, [], None, 0)
    return out


def _co_gen(idem: int) -> str:
    return f"i{idem}"


def _resolve_bound(M, cfg: TraceConfig) -> int:
    return M.bound if M.bound is not None else cfg.max_delta


def _probe_unbounded(msg, M, probe_nonzero):
    if M.bound is None and probe_nonzero:
        raise NonTermination(msg + "; declare a bound or raise max_delta")


def box_co_type_a(co: DDStruct, M: TypeAEval, cfg: TraceConfig = DEFAULT_CONFIG) -> DStruct:
    """Left type-D structure over K! on the generators of M."""
    bound = _resolve_bound(M, cfg)
    arrows = set()
    for x, g in M.gens.items():
        for y in M.act(x, ()):
            arrows ^= {(x, y, KDUAL_OPS.unit(g.idem))}
        for n in range(1, bound + 1):
            for bprod, apath, _end in dd_paths(co, _co_gen(g.idem), n):
                for y in M.act(x, apath):
                    arrows ^= {(x, y, bprod)}
        probe = any(M.act(x, apath)
                    for _b, apath, _e in dd_paths(co, _co_gen(g.idem), bound + 1))
        _probe_unbounded(f"type-A side still acts at coaction depth {bound + 1}",
                         M, probe)
    return DStruct(KDUAL_OPS, "left", dict(M.gens),
                   sorted(arrows, key=lambda t: (t[0], t[1], str(t[2]))))


def box_co_da(co: DDStruct, M: DAEval, cfg: TraceConfig = DEFAULT_CONFIG) -> DDStruct:
    """DD structure over (K!, K) from pairing the cotrace with a DA bimodule
    over (K, K); the right K-outputs of M ride along."""
    bound = _resolve_bound(M, cfg)
    arrows = set()
    for x, g in M.gens.items():
        for y, c in M.act(x, ()):
            arrows ^= {(x, y, KDUAL_OPS.unit(g.left), c)}
        for n in range(1, bound + 1):
            for bprod, apath, _end in dd_paths(co, _co_gen(g.left), n):
                for y, c in M.act(x, apath):
                    arrows ^= {(x, y, bprod, c)}
        probe = any(M.act(x, apath)
                    for _b, apath, _e in dd_paths(co, _co_gen(g.left), bound + 1))
        _probe_unbounded("DA side still acts past the cap in box_co_da", M, probe)
    return DDStruct(dict(M.gens),
                    sorted(arrows, key=lambda t: (t[0], t[1], str(t[2]), str(t[3]))))


def box_da_co(M: DAEval, co: DDStruct, cfg: TraceConfig = DEFAULT_CONFIG) -> DDStruct:
    """DD structure over (K!, K) from a DA bimodule over (K!, K!) whose right
    inputs consume the cotrace's dual outputs."""
    bound = _resolve_bound(M, cfg)
    arrows = set()
    for x, g in M.gens.items():
        for y, c in M.act(x, ()):
            arrows ^= {(x, y, c, ak.unit(g.right))}
        for n in range(1, bound + 1):
            for bpath, aprod, _end in dd_paths_rev(co, _co_gen(g.right), n):
                for y, c in M.act(x, bpath):
                    arrows ^= {(x, y, c, aprod)}
        probe = any(M.act(x, bpath)
                    for bpath, _a, _e in dd_paths_rev(co, _co_gen(g.right), bound + 1))
        _probe_unbounded("DA side still acts past the cap in box_da_co", M, probe)
    return DDStruct(dict(M.gens),
                    sorted(arrows, key=lambda t: (t[0], t[1], str(t[2]), str(t[3]))))


def _split_arrows(arrows):
    """Separate unit-coefficient arrows (the internal differential) from the
    coaction supply fed to the trace."""
    internal, supply = {}, {}
    for entry in arrows:
        src, dst, b = entry[0], entry[1], entry[2]
        rest = entry[3] if len(entry) == 4 else None
        if b.is_unit:
            internal.setdefault(src, set())
            internal[src] ^= {(dst, rest) if rest is not None else dst}
        else:
            supply.setdefault(src, []).append((b, dst, rest))
    return internal, supply


class TraceBoxTypeA(TypeAEval):
    """trace (x) N for a left type-D structure N over K!: a left A-infinity
    module over K whose actions are evaluated on demand."""

    def __init__(self, N: DStruct, cfg: TraceConfig = DEFAULT_CONFIG):
        if N.algebra is not KDUAL_OPS or N.side != "left":
            raise TypeError("trace pairs with left type-D structures over K!")
        self.algebra = K_OPS
        self.gens = dict(N.gens)
        self.cfg = cfg
        self.N = N
        self.internal, self._supply = _split_arrows(N.arrows)
        self.bound = cobonsai_scan(N, cfg.max_delta) + 1

    def supply(self, tok):
        return self._supply.get(tok, ())

    def act(self, x, aseq):
        aseq = tuple(aseq)
        if not aseq:
            return frozenset(self.internal.get(x, ()))
        res = trace_box_action(aseq, self.supply, x, self.gens[x].idem,
                               rider_unit=None, cfg=self.cfg)
        return frozenset(tok for tok, _ in res)


class TraceBoxDA(DAEval):
    """trace (x) N for a DD structure N over (K!, K): a DA bimodule over
    (K, K) evaluated on demand."""

    def __init__(self, N: DDStruct, cfg: TraceConfig = DEFAULT_CONFIG):
        self.algebra_in = K_OPS
        self.algebra_out = K_OPS
        self.gens = dict(N.gens)
        self.cfg = cfg
        self.N = N
        self.internal, self._supply = _split_arrows(N.arrows)
        self.bound = cobonsai_scan(N, cfg.max_delta) + 1

    def supply(self, tok):
        return self._supply.get(tok, ())

    def act(self, x, aseq):
        aseq = tuple(aseq)
        if not aseq:
            return frozenset(self.internal.get(x, ()))
        res = trace_box_action(aseq, self.supply, x, self.gens[x].left,
                               rider_unit=ak.unit(self.gens[x].right),
                               cfg=self.cfg)
        return frozenset(res)

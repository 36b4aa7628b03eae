"""Data model and bounded relation checkers for type-D / DD / A / DA / AA
structures, morphism calculus, cones, boundedness scans, and an F2 homology
utility.

Module elements are F2-sets (frozensets) throughout; relation checkers
accumulate with symmetric difference and report the inputs that violate a
relation together with the leftover terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import algebra_k as ak
from . import algebra_kdual as kd


class NonTermination(RuntimeError):
    pass


class SideMismatch(TypeError):
    pass


# ---------------------------------------------------------------------------
# algebra adapters


@dataclass(frozen=True)
class AlgebraOps:
    name: str
    unit: object
    is_unit: object
    mul: object           # mono x mono -> mono | None
    mu1: object           # mono -> frozenset of monos
    mu0: object           # () -> frozenset of monos
    monomials: object     # (left, right, size) -> iterable
    size: object          # mono -> int
    parse: object         # (text, left, right) -> frozenset
    fmt: object           # elt -> str


def _k_mono_mul(a, b):
    return a * b


K_OPS = AlgebraOps(
    name="K",
    unit=ak.unit,
    is_unit=lambda m: m.is_unit,
    mul=_k_mono_mul,
    mu1=lambda m: frozenset(),
    mu0=lambda: frozenset(),
    monomials=ak.kmono_range,
    size=lambda m: m.degree,
    parse=ak.parse_kelt,
    fmt=ak.format_kelt,
)

KDUAL_OPS = AlgebraOps(
    name="K!",
    unit=kd.dunit,
    is_unit=lambda m: m.is_unit,
    mul=_k_mono_mul,
    mu1=lambda m: kd.kdual_mu1(m),
    mu0=kd.kdual_mu0,
    monomials=kd.dualmono_range,
    size=lambda m: m.length,
    parse=kd.parse_dualelt,
    fmt=kd.format_dualelt,
)


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def fail(self, msg: str):
        self.failures.append(msg)

    def merge(self, other: "Report"):
        self.checked += other.checked
        self.failures.extend(f"{other.name}: {m}" for m in other.failures)

    def describe(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"{status} {self.name} ({self.checked} checks)"]
        lines.extend("  " + f for f in self.failures[:50])
        if len(self.failures) > 50:
            lines.append(f"  ... {len(self.failures) - 50} more")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# generators and arrow-list structures


@dataclass(frozen=True)
class Gen:
    id: str
    left: int
    right: int = 0
    filt: int = 0

    @property
    def idem(self) -> int:
        """The single idempotent of a one-sided module generator."""
        return self.left


@dataclass
class DStruct:
    """Type-D structure backed by a finite arrow list.

    side = "left":  delta1(x) = sum a (x) y   (left modules over K!)
    side = "right": delta1(x) = sum y (x) a   (right modules over K)
    """

    algebra: AlgebraOps
    side: str
    gens: dict
    arrows: list  # (src id, dst id, coefficient monomial)

    def __post_init__(self):
        for src, dst, a in self.arrows:
            if src not in self.gens or dst not in self.gens:
                raise ValueError(f"dangling arrow {src}->{dst}")
            x, y = self.gens[src], self.gens[dst]
            if self.side == "left":
                okc = (a.left, a.right) == (x.idem, y.idem)
            else:
                okc = (a.left, a.right) == (y.idem, x.idem)
            if not okc:
                raise ValueError(f"idempotent mismatch on arrow {src}->{dst} ({a})")

    def delta1(self, x: str):
        return [(a, dst) for src, dst, a in self.arrows if src == x]


@dataclass
class DDStruct:
    """Type-DD structure over (K!, K): delta(x) = sum b (x) y (x) a."""

    gens: dict
    arrows: list  # (src, dst, left K!-monomial, right K-monomial)

    def __post_init__(self):
        for src, dst, b, a in self.arrows:
            if src not in self.gens or dst not in self.gens:
                raise ValueError(f"dangling arrow {src}->{dst}")
            x, y = self.gens[src], self.gens[dst]
            if (b.left, b.right) != (x.left, y.left):
                raise ValueError(f"left idempotent mismatch on {src}->{dst} ({b})")
            if (a.left, a.right) != (y.right, x.right):
                raise ValueError(f"right idempotent mismatch on {src}->{dst} ({a})")

    def delta1(self, x: str):
        return [(b, dst, a) for src, dst, b, a in self.arrows if src == x]

    def arrow_set(self) -> frozenset:
        return frozenset(self.arrows)


# ---------------------------------------------------------------------------
# evaluator-backed sides


class TypeAEval:
    """Left A-infinity module: act(x, (a1, .., an)) with a1 innermost."""

    algebra: AlgebraOps
    gens: dict
    bound: int | None = None

    def act(self, x: str, aseq: tuple) -> frozenset:
        raise NotImplementedError


class DAEval:
    """DA bimodule: act(x, aseq) -> frozenset of (gen, output monomial).

    input_side says which algebra acts: "left" for bimodules whose inputs
    multiply on the left (output coefficients on the right), "right" for the
    mirrored shape where the coaction side is on the left.
    """

    algebra_in: AlgebraOps
    algebra_out: AlgebraOps
    gens: dict
    bound: int | None = None
    input_side: str = "left"

    def act(self, x: str, aseq: tuple) -> frozenset:
        raise NotImplementedError

    def input_idem(self, g: Gen) -> int:
        return g.left if self.input_side == "left" else g.right

    def output_idem(self, g: Gen) -> int:
        return g.right if self.input_side == "left" else g.left


class AAEval:
    """AA bimodule: act(x, aseq, bseq) -> frozenset of gens."""

    algebra_left: AlgebraOps
    algebra_right: AlgebraOps
    gens: dict

    def act(self, x: str, aseq: tuple, bseq: tuple) -> frozenset:
        raise NotImplementedError


class FiniteTypeA(TypeAEval):
    def __init__(self, algebra, gens, table, bound=None):
        self.algebra = algebra
        self.gens = gens
        self.table = {}
        for (x, aseq), out in table.items():
            self.table[x, tuple(aseq)] = frozenset(out)
        self.bound = bound

    def act(self, x, aseq):
        return self.table.get((x, tuple(aseq)), frozenset())


class FiniteDA(DAEval):
    def __init__(self, algebra_in, algebra_out, gens, table, bound=None,
                 input_side="left"):
        self.algebra_in = algebra_in
        self.algebra_out = algebra_out
        self.gens = gens
        self.input_side = input_side
        self.table = {}
        for (x, aseq), out in table.items():
            self.table[x, tuple(aseq)] = frozenset(out)
        self.bound = bound

    def act(self, x, aseq):
        return self.table.get((x, tuple(aseq)), frozenset())


class IdentityDA(DAEval):
    """delta2(a, i) = i' (x) a on the two idempotent generators."""

    def __init__(self, ops: AlgebraOps, input_side="left"):
        self.algebra_in = ops
        self.algebra_out = ops
        self.gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
        self.bound = 1
        self.input_side = input_side

    def act(self, x, aseq):
        if len(aseq) != 1:
            return frozenset()
        a = aseq[0]
        if self.input_side == "left":
            if a.right != self.gens[x].left:
                return frozenset()
            return frozenset(((f"i{a.left}", a),))
        if a.left != self.gens[x].right:
            return frozenset()
        return frozenset(((f"i{a.right}", a),))


class MorphismDA(DAEval):
    """DA bimodule of an algebra endomorphism phi: the one input is fed
    through phi and handed out as the coefficient."""

    def __init__(self, ops: AlgebraOps, phi, name="phi", input_side="left"):
        self.algebra_in = ops
        self.algebra_out = ops
        self.gens = {"i0": Gen("i0", 0, 0), "i1": Gen("i1", 1, 1)}
        self.phi = phi
        self.name = name
        self.bound = 1
        self.input_side = input_side

    def act(self, x, aseq):
        if len(aseq) != 1:
            return frozenset()
        a = aseq[0]
        if self.input_side == "left":
            if a.right != self.gens[x].left:
                return frozenset()
            return frozenset((f"i{m.left}", m) for m in self.phi(a))
        if a.left != self.gens[x].right:
            return frozenset()
        return frozenset((f"i{m.right}", m) for m in self.phi(a))


# ---------------------------------------------------------------------------
# input sequence enumeration


def monomial_sequences(ops: AlgebraOps, n: int, size_cap: int, start_idem=None,
                       total_cap=None, include_units=False, side: str = "left"):
    """Composable monomial sequences (a1, .., an), a1 innermost, with
    per-monomial size <= size_cap.

    side="left": a1 acts first on a left module (right(a1) = start_idem,
    chained by right(a_{i+1}) = left(a_i)).  side="right": the mirror for
    right actions (left(b1) = start_idem, chained by left(b_{i+1}) =
    right(b_i))."""
    pairs = [(0, 0), (1, 1), (1, 0), (0, 1)]
    pool = []
    for l, r in pairs:
        for m in ops.monomials(l, r, size_cap):
            if include_units or not ops.is_unit(m):
                pool.append(m)

    def rec(seq, used):
        if len(seq) == n:
            yield tuple(seq)
            return
        if side == "left":
            want = seq[-1].left if seq else start_idem
            attr = "right"
        else:
            want = seq[-1].right if seq else start_idem
            attr = "left"
        for m in pool:
            if want is not None and getattr(m, attr) != want:
                continue
            sz = ops.size(m)
            if total_cap is not None and used + sz > total_cap:
                continue
            seq.append(m)
            yield from rec(seq, used + sz)
            seq.pop()

    yield from rec([], 0)


def _insertions(ops: AlgebraOps, seq: tuple, inner_idem: int, side: str = "left"):
    """All mu-modified versions of an input sequence: mu1 replacements,
    mu2 merges of adjacent inputs, and mu0 insertions."""
    out = []
    n = len(seq)
    for j in range(n):
        for d in ops.mu1(seq[j]):
            out.append(seq[:j] + (d,) + seq[j + 1:])
    for j in range(n - 1):
        if side == "left":
            p = ops.mul(seq[j + 1], seq[j])
        else:
            p = ops.mul(seq[j], seq[j + 1])
        if p is not None:
            out.append(seq[:j] + (p,) + seq[j + 2:])
    for m0 in ops.mu0():
        for j in range(n + 1):
            if side == "left":
                junction = seq[j - 1].left if j > 0 else inner_idem
                fits = m0.right == junction
            else:
                junction = seq[j - 1].right if j > 0 else inner_idem
                fits = m0.left == junction
            if fits:
                out.append(seq[:j] + (m0,) + seq[j:])
    return out


# ---------------------------------------------------------------------------
# relation checkers


def check_type_d(struct: DStruct, max_iter: int = 3, only_gens=None) -> Report:
    """sum_n (mu_n on coefficients) of delta^n = 0, n <= 3.

    only_gens restricts the sources checked (used for window-truncated
    structures whose boundary generators are knowingly incomplete)."""
    ops = struct.algebra
    rep = Report(f"type-D relation ({ops.name}, {struct.side})")
    for x, g in struct.gens.items():
        if only_gens is not None and x not in only_gens:
            continue
        acc = set()
        for m0 in ops.mu0():
            if struct.side == "left" and m0.right == g.idem:
                acc ^= {(m0, x)}
            if struct.side == "right" and m0.left == g.idem:
                acc ^= {(m0, x)}
        for a1, y in struct.delta1(x):
            for d in ops.mu1(a1):
                acc ^= {(d, y)}
            for a2, z in struct.delta1(y):
                p = ops.mul(a1, a2) if struct.side == "left" else ops.mul(a2, a1)
                if p is not None:
                    acc ^= {(p, z)}
        rep.checked += 1
        if acc:
            rep.fail(f"at {x}: leftover {sorted(str(t) for t in acc)}")
    return rep


def check_dd(struct: DDStruct, max_iter: int = 3, only_gens=None) -> Report:
    """Curved DD relation over (K!, K): left coefficients multiply in path
    order, right coefficients in the opposite order; mu1 and mu0 of the left
    algebra included.  only_gens restricts the sources checked."""
    rep = Report("DD relation (K!, K)")
    for x, g in struct.gens.items():
        if only_gens is not None and x not in only_gens:
            continue
        acc = set()
        for m0 in kd.kdual_mu0():
            if m0.left == g.left:  # mu0 (x) x (x) 1
                acc ^= {(m0, x, ak.unit(g.right))}
        for b1, y, a1 in struct.delta1(x):
            for d in kd.kdual_mu1(b1):
                acc ^= {(d, y, a1)}
            for b2, z, a2 in struct.delta1(y):
                bb = b1 * b2
                aa = a2 * a1
                if bb is not None and aa is not None:
                    acc ^= {(bb, z, aa)}
        rep.checked += 1
        if acc:
            rep.fail(f"at {x}: leftover {sorted((str(b), z, str(a)) for b, z, a in acc)}")
    return rep


def check_type_a(M: TypeAEval, max_len: int = 4, deg_cap: int = 4) -> Report:
    ops = M.algebra
    rep = Report(f"A-infinity module relation ({ops.name})")
    for x, g in M.gens.items():
        for n in range(0, max_len + 1):
            for seq in monomial_sequences(ops, n, deg_cap, start_idem=g.idem):
                acc = set()
                for i in range(n + 1):
                    for y in M.act(x, seq[:i]):
                        acc ^= M.act(y, seq[i:])
                for mod in _insertions(ops, seq, g.idem):
                    acc ^= M.act(x, mod)
                rep.checked += 1
                if acc:
                    rep.fail(f"x={x} inputs=({', '.join(map(str, seq))}): "
                             f"leftover {sorted(acc)}")
    return rep


def check_da(M: DAEval, max_len: int = 4, deg_cap: int = 4) -> Report:
    ops_in, ops_out = M.algebra_in, M.algebra_out
    side = M.input_side
    rep = Report(f"DA relation ({ops_in.name} -> {ops_out.name}, {side} inputs)")
    for x, g in M.gens.items():
        start = M.input_idem(g)
        for n in range(0, max_len + 1):
            for seq in monomial_sequences(ops_in, n, deg_cap, start_idem=start,
                                          side=side):
                acc = set()
                if n == 0:
                    for m0 in ops_out.mu0():
                        hits = m0.left == g.right if side == "left" \
                            else m0.right == g.left
                        if hits:
                            acc ^= {(x, m0)}
                for y, c in M.act(x, seq):
                    for d in ops_out.mu1(c):
                        acc ^= {(y, d)}
                for i in range(n + 1):
                    for y, c1 in M.act(x, seq[:i]):
                        for z, c2 in M.act(y, seq[i:]):
                            p = ops_out.mul(c2, c1) if side == "left" \
                                else ops_out.mul(c1, c2)
                            if p is not None:
                                acc ^= {(z, p)}
                for mod in _insertions(ops_in, seq, start, side=side):
                    acc ^= M.act(x, mod)
                rep.checked += 1
                if acc:
                    rep.fail(f"x={x} inputs=({', '.join(map(str, seq))}): "
                             f"leftover {sorted((y, str(c)) for y, c in acc)}")
    return rep


def check_aa(M: AAEval, max_left: int = 2, max_right: int = 4,
             left_cap: int = 3, right_cap: int = 4) -> Report:
    okl, okr = M.algebra_left, M.algebra_right
    rep = Report(f"AA relation ({okl.name}, {okr.name})")
    for x, g in M.gens.items():
        for k in range(0, max_left + 1):
            for aseq in monomial_sequences(okl, k, left_cap, start_idem=g.left):
                for n in range(0, max_right + 1):
                    for bseq in monomial_sequences(okr, n, right_cap,
                                                   start_idem=g.right,
                                                   side="right"):
                        acc = set()
                        for i in range(k + 1):
                            for j in range(n + 1):
                                for y in M.act(x, aseq[:i], bseq[:j]):
                                    acc ^= M.act(y, aseq[i:], bseq[j:])
                        for mod in _insertions(okl, aseq, g.left):
                            acc ^= M.act(x, mod, bseq)
                        for mod in _insertions(okr, bseq, g.right, side="right"):
                            acc ^= M.act(x, aseq, mod)
                        rep.checked += 1
                        if acc:
                            rep.fail(
                                f"x={x} a=({', '.join(map(str, aseq))}) "
                                f"b=({', '.join(map(str, bseq))}): leftover {sorted(acc)}")
    return rep


def check_strict_unital(M, max_len: int = 3, deg_cap: int = 3) -> Report:
    """Units act by the identity in the binary action; any longer action
    with a unit input vanishes."""
    rep = Report("strict unitality")

    def one_sided(act_fn, ops, gidem, x, expected, side="left"):
        u = ops.unit(gidem)
        got = act_fn((u,))
        rep.checked += 1
        if got != expected:
            rep.fail(f"m2(unit, {x}) = {sorted(map(str, got))}")
        wrong = act_fn((ops.unit(1 - gidem),))
        rep.checked += 1
        if wrong:
            rep.fail(f"idempotent-mismatched unit acts on {x}")
        for n in range(2, max_len + 1):
            for seq in monomial_sequences(ops, n - 1, deg_cap, start_idem=gidem,
                                          side=side):
                for pos in range(n):
                    if side == "left":
                        junction = seq[pos - 1].left if pos > 0 else gidem
                    else:
                        junction = seq[pos - 1].right if pos > 0 else gidem
                    useq = seq[:pos] + (ops.unit(junction),) + seq[pos:]
                    rep.checked += 1
                    if act_fn(useq):
                        rep.fail(f"unit inside {tuple(map(str, useq))} at {x} acts")

    for x, g in M.gens.items():
        if isinstance(M, TypeAEval):
            one_sided(lambda s: M.act(x, s), M.algebra, g.idem, x,
                      frozenset((x,)))
        elif isinstance(M, DAEval):
            one_sided(lambda s: M.act(x, s), M.algebra_in, M.input_idem(g), x,
                      frozenset(((x, M.algebra_out.unit(M.output_idem(g))),)),
                      side=M.input_side)
        elif isinstance(M, AAEval):
            one_sided(lambda s: M.act(x, s, ()), M.algebra_left, g.left, x,
                      frozenset((x,)))
            one_sided(lambda s: M.act(x, (), s), M.algebra_right, g.right, x,
                      frozenset((x,)), side="right")
            # mixed-side unit vanishing
            u = M.algebra_left.unit(g.left)
            for bm in M.algebra_right.monomials(g.right, g.right, 2):
                rep.checked += 1
                if M.act(x, (u,), (bm,)):
                    rep.fail(f"m(1, {x}, {bm}) nonzero")
    return rep


# ---------------------------------------------------------------------------
# morphisms and cones


class MorphismA:
    """Morphism of A-infinity modules; comp(x, aseq) = f_{n+1}(a_n..a_1, x)."""

    def __init__(self, source: TypeAEval, target: TypeAEval, comp):
        if source.algebra is not target.algebra:
            raise SideMismatch("morphism endpoints over different algebras")
        self.source = source
        self.target = target
        self._comp = comp

    def comp(self, x, aseq) -> frozenset:
        return self._comp(x, tuple(aseq))


def finite_morphism(source, target, table) -> MorphismA:
    tbl = {(x, tuple(s)): frozenset(v) for (x, s), v in table.items()}
    return MorphismA(source, target, lambda x, s: tbl.get((x, s), frozenset()))


def identity_morphism(M: TypeAEval) -> MorphismA:
    return MorphismA(M, M, lambda x, s: frozenset((x,)) if not s else frozenset())


def morphism_diff(f: MorphismA) -> MorphismA:
    M, N, ops = f.source, f.target, f.source.algebra

    def comp(x, seq):
        acc = set()
        n = len(seq)
        gidem = M.gens[x].idem
        for i in range(n + 1):
            for y in M.act(x, seq[:i]):
                acc ^= f.comp(y, seq[i:])
            for y in f.comp(x, seq[:i]):
                acc ^= N.act(y, seq[i:])
        for mod in _insertions(ops, seq, gidem):
            acc ^= f.comp(x, mod)
        return frozenset(acc)

    return MorphismA(M, N, comp)


def morphism_compose(g: MorphismA, f: MorphismA) -> MorphismA:
    if f.target is not g.source:
        raise SideMismatch("cannot compose: endpoints differ")

    def comp(x, seq):
        acc = set()
        for i in range(len(seq) + 1):
            for y in f.comp(x, seq[:i]):
                acc ^= g.comp(y, seq[i:])
        return frozenset(acc)

    return MorphismA(f.source, g.target, comp)


class ConeA(TypeAEval):
    def __init__(self, f: MorphismA):
        self.f = f
        self.algebra = f.source.algebra
        self.gens = {}
        for x, g in f.source.gens.items():
            self.gens["s:" + x] = Gen("s:" + x, g.left, g.right, g.filt)
        for x, g in f.target.gens.items():
            self.gens["t:" + x] = Gen("t:" + x, g.left, g.right, g.filt)

    def act(self, x, aseq):
        tag, base = x.split(":", 1)
        out = set()
        if tag == "s":
            out ^= {f"s:{y}" for y in self.f.source.act(base, aseq)}
            out ^= {f"t:{y}" for y in self.f.comp(base, aseq)}
        else:
            out ^= {f"t:{y}" for y in self.f.target.act(base, aseq)}
        return frozenset(out)


def cone(f: MorphismA) -> ConeA:
    return ConeA(f)


# ---------------------------------------------------------------------------
# boundedness / filtration scans


def cobonsai_scan(struct, max_iter: int = 8) -> int:
    """Max over unit-free delta^n paths (n <= max_iter) of
    sum(-gr_alg(b) - 1) for the K!-side coefficients."""
    best = {x: 0 for x in struct.gens}
    overall = 0
    for _ in range(max_iter):
        nxt = {}
        for x, v in best.items():
            for entry in struct.delta1(x):
                b, y = entry[0], entry[1]
                if b.is_unit:
                    continue
                w = v + (-b.gr_alg() - 1)
                if w > nxt.get(y, -1):
                    nxt[y] = w
        if not nxt:
            break
        overall = max(overall, max(nxt.values()))
        best = nxt
    return overall


def dd_commensurability_scan(struct: DDStruct, max_iter: int = 8) -> int:
    """Smallest C with every delta^n path dropping the U-adic filtration by
    at most C (filtration = wt_U on K, -wt_theta on K!, gen filt levels)."""
    cur = {x: 0 for x in struct.gens}
    worst = 0
    for _ in range(max_iter):
        nxt = {}
        for x, v in cur.items():
            for b, y, a in struct.delta1(x):
                lvl = v + a.wt_u() - b.wt_theta() \
                    + struct.gens[y].filt - struct.gens[x].filt
                if y not in nxt or lvl < nxt[y]:
                    nxt[y] = lvl
        if not nxt:
            break
        worst = min(worst, min(nxt.values()))
        cur = nxt
    return max(0, -worst)


def bonsai_scan(M, input_iter) -> int:
    """Max observed operation-tree degree over nonzero actions.

    input_iter yields (x, aseq) for one-sided / DA modules and
    (x, aseq, bseq) for AA bimodules; a single action m with k+n algebra
    inputs spans a tree of degree k+n-1.
    """
    best = 0
    for item in input_iter:
        if len(item) == 2:
            x, aseq = item
            val = M.act(x, aseq)
            deg = len(aseq) - 1
        else:
            x, aseq, bseq = item
            val = M.act(x, aseq, bseq)
            deg = len(aseq) + len(bseq) - 1
        if val:
            best = max(best, deg)
    return best


def commensurability_scan(M, input_iter, wt_in=None, wt_out=None) -> int:
    """Minimal C with (filtration of inputs) - (filtration of outputs) <= C
    over the scanned actions."""
    worst = 0
    for item in input_iter:
        if len(item) == 2:
            x, aseq = item
            out = M.act(x, aseq)
            lvl_in = sum(m.wt_u() for m in aseq) + M.gens[x].filt
            for o in out:
                if isinstance(o, tuple):
                    y, c = o
                    lvl_out = c.wt_u() + M.gens[y].filt
                else:
                    lvl_out = M.gens[o].filt
                worst = max(worst, lvl_in - lvl_out)
        else:
            x, aseq, bseq = item
            out = M.act(x, aseq, bseq)
            lvl_in = sum(m.wt_u() for m in aseq) \
                - sum(m.wt_theta() for m in bseq) + M.gens[x].filt
            for o in out:
                worst = max(worst, lvl_in - M.gens[o].filt)
    return worst


# ---------------------------------------------------------------------------
# F2 chain complex homology


def f2_homology_ranks(gens: list, arrows: list, grading: dict | None = None):
    """Betti numbers over F2 by Gaussian elimination.  arrows are (src, dst)
    pairs of an already-specialized differential; it must square to zero."""
    idx = {g: i for i, g in enumerate(gens)}
    cols = {g: 0 for g in gens}
    for src, dst in arrows:
        cols[src] ^= 1 << idx[dst]
    # d^2 = 0 check
    for g in gens:
        acc = 0
        v = cols[g]
        for h in gens:
            if v >> idx[h] & 1:
                acc ^= cols[h]
        if acc:
            raise ValueError(f"differential does not square to zero at {g}")

    def rank(vectors):
        basis = []
        r = 0
        for v in vectors:
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
                basis.sort(reverse=True)
                r += 1
        return r

    if grading is None:
        r = rank(list(cols.values()))
        return [len(gens) - 2 * r]
    degrees = sorted({grading[g] for g in gens})
    out = []
    for d in degrees:
        layer = [g for g in gens if grading[g] == d]
        below = [g for g in gens if grading[g] == d + 1]
        rk_out = rank([cols[g] for g in layer])
        rk_in = rank([cols[g] for g in below])
        out.append(len(layer) - rk_out - rk_in)
    return out


# ---------------------------------------------------------------------------
# module file format (shared with the CLI)


def _parse_gen_line(parts):
    gid = parts[1]
    idems = parts[2].split(",")
    left = int(idems[0][1])
    right = int(idems[1][1]) if len(idems) > 1 else left
    filt = 0
    for extra in parts[3:]:
        if extra.startswith("filt="):
            filt = int(extra[5:])
        else:
            raise ValueError(f"bad gen attribute {extra!r}")
    return Gen(gid, left, right, filt)


def _gen_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def load_dstruct(text: str, algebra: AlgebraOps, side: str) -> DStruct:
    gens, arrows = {}, []
    for parts in _gen_lines(text):
        if parts[0] == "gen":
            g = _parse_gen_line(parts)
            gens[g.id] = g
        elif parts[0] == "arrow":
            src, dst, coef = parts[1], parts[2], " ".join(parts[3:])
            if src not in gens or dst not in gens:
                raise ValueError(f"dangling arrow {src}->{dst}")
            x, y = gens[src], gens[dst]
            li, ri = (x.idem, y.idem) if side == "left" else (y.idem, x.idem)
            for m in algebra.parse(coef, li, ri):
                arrows.append((src, dst, m))
        else:
            raise ValueError(f"bad line {' '.join(parts)!r}")
    return DStruct(algebra, side, gens, arrows)


def load_ddstruct(text: str) -> DDStruct:
    gens, arrows = {}, []
    for parts in _gen_lines(text):
        if parts[0] == "gen":
            g = _parse_gen_line(parts)
            gens[g.id] = g
        elif parts[0] == "arrow":
            src, dst, coef = parts[1], parts[2], " ".join(parts[3:])
            if "|" not in coef:
                raise ValueError(f"DD arrow needs left|right coefficients: {coef!r}")
            if src not in gens or dst not in gens:
                raise ValueError(f"dangling arrow {src}->{dst}")
            x, y = gens[src], gens[dst]
            lt, rt = coef.split("|", 1)
            bs = kd.parse_dualelt(lt.strip(), x.left, y.left)
            as_ = ak.parse_kelt(rt.strip(), y.right, x.right)
            for b in bs:
                for a in as_:
                    arrows.append((src, dst, b, a))
        else:
            raise ValueError(f"bad line {' '.join(parts)!r}")
    return DDStruct(gens, arrows)


def load_da_table(text: str, ops_in: AlgebraOps = K_OPS,
                  ops_out: AlgebraOps = K_OPS) -> FiniteDA:
    """Finite DA bimodule: 'arrow src dst a1,a2,..|out' with a1 innermost."""
    gens, table = {}, {}
    for parts in _gen_lines(text):
        if parts[0] == "gen":
            g = _parse_gen_line(parts)
            gens[g.id] = g
        elif parts[0] == "arrow":
            src, dst, coef = parts[1], parts[2], " ".join(parts[3:])
            ins, out = coef.split("|", 1)
            if src not in gens or dst not in gens:
                raise ValueError(f"dangling arrow {src}->{dst}")
            aseq = []
            idem = gens[src].right
            for tok in ins.split(","):
                tok = tok.strip()
                elt = ops_in.parse(tok, None, idem)
                if len(elt) != 1:
                    raise ValueError(f"DA input {tok!r} must be one monomial")
                (m,) = elt
                aseq.append(m)
                idem = m.left
            for m in ops_out.parse(out.strip(), gens[dst].right, gens[src].right):
                key = (src, tuple(aseq))
                table.setdefault(key, set()).add((dst, m))
        else:
            raise ValueError(f"bad line {' '.join(parts)!r}")
    bound = max((len(s) for _, s in table), default=1)
    return FiniteDA(ops_in, ops_out, gens, table, bound=bound)


def format_dd_arrows(struct: DDStruct) -> str:
    lines = [f"gen {g.id} i{g.left},i{g.right}" + (f" filt={g.filt}" if g.filt else "")
             for g in struct.gens.values()]
    lines += sorted(f"arrow {src} {dst} {b}|{a}" for src, dst, b, a in struct.arrows)
    return "\n".join(lines)

from fractions import Fraction

from skoszul.algebra_k import all_kmonos, arrow, kmono_range, sigma, tau, ut, wz
from skoszul.algebra_kdual import (
    V_INF, all_dualmonos, bridge, dualmono_range, kdual_mu1, kdual_mul,
    kdualinf_mu3, parse_dualmono, s, t, theta0, theta1, w, word00, z,
)
from skoszul.gradings import (
    G_SIGMA, G_TAU, LAMBDA1, affine_identity, bigrading, bigrading_add_k,
    compose_many, grading_k, grading_kdual, heisenberg_collapse, lam_elt,
    translation,
)


def test_k_generator_values():
    bg, g = grading_k(arrow("sigma", 2, 3))
    assert bg == bigrading(-4, 3)
    bg, g = grading_k(wz(1, 0))
    assert g.map == translation(-2, 0)
    _, gs = grading_k(sigma)
    assert gs.map == G_SIGMA and (gs.src, gs.tgt) == (0, 1)
    assert G_SIGMA.a == 1 and G_SIGMA.c == Fraction(1, 2) and G_SIGMA.d == Fraction(-1, 2)


def test_k_multiplicativity_degree_6():
    monos = [m for m in all_kmonos(6)]
    by_left = {}
    for m in monos:
        by_left.setdefault(m.left, []).append(m)
    checked = 0
    for a in monos:
        for b in by_left.get(a.right, ()):
            if a.degree + b.degree > 6:
                continue
            p = a * b
            assert p is not None
            _, ga = grading_k(a)
            _, gb = grading_k(b)
            _, gp = grading_k(p)
            assert gp == ga.compose(gb)
            assert grading_k(p)[0] == bigrading_add_k(a, b)
            checked += 1
    assert checked > 2000


def test_kdual_generator_values():
    assert grading_kdual(w)[0] == bigrading(1, -1)
    assert grading_kdual(s)[0] == bigrading(-1, 0)
    assert grading_kdual(t)[0] == bigrading(-1, 0)
    assert grading_kdual(theta1)[0] == bigrading(1, 0)
    ginv = G_SIGMA.inverse()
    assert (ginv.a, ginv.b, ginv.c, ginv.d) == (1, 0, 1, -2)
    tinv = G_TAU.inverse()
    assert (tinv.a, tinv.b, tinv.c, tinv.d) == (1, 2, 1, 0)
    assert grading_kdual(theta0)[1] == lam_elt(0)
    assert grading_kdual(parse_dualmono("z.s"))[1] == grading_kdual(bridge("s", True))[1]


def test_heisenberg():
    assert heisenberg_collapse(grading_k(wz(1, 0))[1]) == translation(-2, -1)
    assert heisenberg_collapse(grading_k(wz(0, 1))[1]) == translation(0, 1)
    assert heisenberg_collapse(grading_k(sigma)[1]) == affine_identity()
    gtau = heisenberg_collapse(grading_k(tau)[1])
    assert (gtau.a, gtau.b, gtau.c, gtau.d) == (1, -2, 0, 1)
    assert (gtau.tx, gtau.ty) == (0, 0)
    assert heisenberg_collapse(grading_k(ut(1, 0))[1]) == translation(-2, 0)
    for m in all_kmonos(4):
        heisenberg_collapse(grading_k(m)[1])  # stays in the Heisenberg group


def _mu_law_holds(inputs, output_monos, n):
    """g(mu_n(..)) = g(a_1) ... g(a_n) lambda^{n-2}, lambda at the source."""
    gs = [grading_kdual(m)[1] for m in inputs]
    rhs = compose_many(gs).compose(
        GroupoidElt_power(lam_elt(inputs[-1].right), n - 2))
    for m in output_monos:
        assert grading_kdual(m)[1] == rhs


def GroupoidElt_power(g, n):
    out = lam_elt(g.src)
    out = GroupoidEltId(g.src)
    if n >= 0:
        for _ in range(n):
            out = out.compose(g)
    else:
        from skoszul.gradings import GroupoidElt
        inv = GroupoidElt(g.map.inverse(), g.tgt, g.src)
        for _ in range(-n):
            out = out.compose(inv)
    return out


def GroupoidEltId(idem):
    from skoszul.gradings import groupoid_identity
    return groupoid_identity(idem)


def test_kdual_mu_laws():
    # mu1
    for m in all_dualmonos(5):
        out = kdual_mu1(m)
        if out:
            _mu_law_holds((m,), out, 1)
    # mu2
    monos = list(all_dualmonos(4))
    for a in monos:
        for b in monos:
            if a.right != b.left or a.length + b.length > 5:
                continue
            out = kdual_mul(a, b)
            if out:
                _mu_law_holds((a, b), out, 2)
    # mu3 on the small model (gradings of the length-2 class = gradings of zw)
    from skoszul.algebra_kdual import inf_monomial_range, sdr_incl
    small = list(inf_monomial_range(3))
    for a in small:
        for b in small:
            if a.right != b.left:
                continue
            for c in small:
                if b.right != c.left:
                    continue
                out = kdualinf_mu3(a, b, c)
                if out:
                    _mu_law_holds(tuple(map(sdr_incl, (a, b, c))),
                                  {sdr_incl(m) for m in out}, 3)


def test_gr_alg_law():
    monos = list(all_dualmonos(4))
    for a in monos:
        for b in monos:
            if a.right != b.left or a.length + b.length > 5:
                continue
            for m in kdual_mul(a, b):
                assert m.gr_alg() == a.gr_alg() + b.gr_alg()
    for a in monos:
        for m in kdual_mu1(a):
            assert m.gr_alg() == a.gr_alg() - 1

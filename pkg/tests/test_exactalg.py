import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.polys.numberfields.galoisgroups import galois_group

from quadric_axes.errors import InputError
from quadric_axes.exactalg import (
    PLANAR,
    REDUCIBLE_PLANAR,
    SOLID,
    Poly,
    QuadFieldElem,
    factor_pair_constructibility,
    edge_quartic_constructibility,
    qf_root_search,
    quadratic_factors,
    quartic_constructibility,
    rat,
    rational_root_test,
    rational_sqrt,
    resolvent_system,
    squarefree_decomposition,
    standard_resolvent,
)
from quadric_axes.exactalg.poly import BiPoly, poly_from_ints
from quadric_axes.exactalg.rationalroots import divisors, isolate_real_roots

X = sp.symbols("x")
SQUAREFREE = [2, 3, 5, 6, 7, 10, 11, 13, 15]

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elems(d):
    return st.builds(lambda l, n: QuadFieldElem(d, l, n), fractions, fractions)


def to_sympy(p: Poly):
    return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in p.descending()], X, domain="QQ")


def coeff_list(sp_poly):
    return [sp.Rational(c) for c in sp_poly.all_coeffs()]


# ---------------------------------------------------------------- parsing


@pytest.mark.parametrize("text,value", [("3", 3), ("-7/4", Fraction(-7, 4)), (" 10/5 ", 2)])
def test_rat_accepts_fractions(text, value):
    assert rat(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "abc", "", "1/0", 0.5, True])
def test_rat_rejects(bad):
    with pytest.raises(InputError):
        rat(bad)


def test_squarefree_decomposition():
    assert squarefree_decomposition(Fraction(24)) == (2, 6)
    assert squarefree_decomposition(Fraction(9, 4)) == (Fraction(3, 2), 1)
    s, d = squarefree_decomposition(Fraction(5, 8))
    assert s * s * d == Fraction(5, 8) and d == 10
    assert rational_sqrt(Fraction(49, 16)) == Fraction(7, 4)
    assert rational_sqrt(Fraction(2)) is None
    with pytest.raises(InputError):
        squarefree_decomposition(Fraction(-1))


# ---------------------------------------------------------------- Q(sqrt d)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SQUAREFREE).flatmap(lambda d: st.tuples(elems(d), elems(d), elems(d))))
def test_field_axioms(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if a != 0:
        assert a * a.inverse() == 1
        assert (b / a) * a == b
    assert (a * b).norm() == a.norm() * b.norm()
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert float(a * b) == pytest.approx(float(a) * float(b), rel=1e-9, abs=1e-9)


def test_field_basics():
    s6 = QuadFieldElem.sqrt(6)
    assert s6 * s6 == 6
    assert (1 + s6) ** 2 == 7 + 2 * s6
    assert hash(QuadFieldElem(6, Fraction(2), Fraction(0))) == hash(Fraction(2))
    assert str(Fraction(1, 2) + s6)
    with pytest.raises(InputError):
        QuadFieldElem(4, 1, 1)
    with pytest.raises(InputError):
        QuadFieldElem.sqrt(2) + QuadFieldElem.sqrt(3)
    with pytest.raises(ZeroDivisionError):
        QuadFieldElem(2, 0, 0).inverse()


# ---------------------------------------------------------------- polynomials


@settings(max_examples=80, deadline=None)
@given(st.lists(fractions, min_size=1, max_size=6), st.lists(fractions, min_size=1, max_size=5))
def test_poly_arithmetic_against_sympy(a, b):
    p, q = Poly(tuple(a)), Poly(tuple(b))
    assume(not q.is_zero)
    sp_p, sp_q = sp.Poly(list(reversed(a)), X, domain="QQ"), sp.Poly(list(reversed(b)), X, domain="QQ")
    if not (p * q).is_zero:
        assert coeff_list(to_sympy(p * q)) == coeff_list(sp_p * sp_q)
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.is_zero or rem.degree < q.degree
    g = p.gcd(q)
    if not g.is_zero:
        assert coeff_list(to_sympy(g)) == coeff_list(sp.gcd(sp_p, sp_q).monic())


def test_poly_shift_and_primitive():
    p = poly_from_ints([1, 0, -2])
    assert p.shift(Fraction(1)) == poly_from_ints([1, 2, -1])
    assert Poly((Fraction(1, 2), Fraction(-1, 3))).primitive() == poly_from_ints([2, -3])
    with pytest.raises(InputError):
        Poly((0.5,))


def test_bipoly_basics():
    A = BiPoly({(1, 0): 2, (3, 0): 1, (1, 2): -1})
    assert A(2, 1) == 2 * 2 + 8 - 2
    assert A.divide_lam() is not None and A.divide_lam().only_even_lam()
    assert A.in_lam(Fraction(1)) == Poly((0, 1, 0, 1))
    assert A.is_proportional(A.scale(3))


# ---------------------------------------------------------------- rational roots


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(InputError):
        divisors(0)


def test_planted_rational_roots():
    rnd = random.Random(1)
    for _ in range(100):
        roots = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 6)) for _ in range(rnd.randint(1, 3))]
        extra = poly_from_ints([rnd.randint(1, 5), 0, rnd.randint(1, 5)])   # no real roots
        p = extra
        for r in roots:
            p = p * Poly((-r, Fraction(1)))
        rep = rational_root_test(p)
        assert set(rep.roots) == set(roots)
        for r, k in zip(rep.roots, rep.multiplicities):
            assert k == roots.count(r)


def test_sturm_path_for_large_coefficients():
    big = 10 ** 12 + 39
    p = Poly((Fraction(-7), Fraction(big))) * poly_from_ints([1, 0, -2]) * Poly((Fraction(3), Fraction(big + 2)))
    rep = rational_root_test(p)
    assert rep.method == "sturm"
    assert rep.roots == sorted([Fraction(7, big), Fraction(-3, big + 2)])
    assert len(isolate_real_roots(poly_from_ints([1, 0, -2]))) == 2


def test_no_rational_root_and_zero_root():
    rep = rational_root_test(poly_from_ints([1, 0, -2]))
    assert not rep.has_root and rep.candidates_tested > 0
    rep = rational_root_test(poly_from_ints([1, -1, 0, 0]))
    assert rep.roots == [0, 1] and rep.multiplicities == [2, 1]
    with pytest.raises(InputError):
        rational_root_test(Poly(()))


# ---------------------------------------------------------------- Q(sqrt d) root search


def _rand_elem(rnd, d, k=6):
    return QuadFieldElem(d, Fraction(rnd.randint(-k, k), rnd.randint(1, 4)), Fraction(rnd.randint(-k, k), rnd.randint(1, 4)))


def test_planted_roots_in_quadratic_field():
    rnd = random.Random(7)
    for _ in range(200):
        d = rnd.choice(SQUAREFREE)
        r = _rand_elem(rnd, d)
        s, t = _rand_elem(rnd, d), _rand_elem(rnd, d)
        cubic = Poly((-r, Fraction(1))) * Poly((t, s, Fraction(1)))
        rep = qf_root_search(cubic, d)
        assert r in rep.roots
        for root in rep.roots:
            assert cubic(root) == 0


def test_root_search_against_sympy_factorisation():
    rnd = random.Random(11)
    outcomes = set()
    for i in range(12):
        d = rnd.choice([2, 3, 6])
        if i % 2:
            cs = [_rand_elem(rnd, d, 3) for _ in range(3)]
        else:
            r, s = _rand_elem(rnd, d, 3), _rand_elem(rnd, d, 3)
            cs = list((Poly((-r, Fraction(1))) * Poly((s, Fraction(0), Fraction(1)))).coeffs[:3])
        cs = [c if isinstance(c, QuadFieldElem) else QuadFieldElem(d, c, 0) for c in cs]
        cubic = Poly((cs[0], cs[1], cs[2], Fraction(1)))
        rep = qf_root_search(cubic, d)
        sd = sp.sqrt(d)
        expr = X ** 3 + sum((sp.Rational(c.lam.numerator, c.lam.denominator)
                             + sp.Rational(c.nu.numerator, c.nu.denominator) * sd) * X ** i
                            for i, c in enumerate(cs))
        _, facs = sp.factor_list(sp.expand(expr), X, extension=sd)
        linear = sum(m for f, m in facs if sp.degree(f, X) == 1)
        assert (len(rep.roots) > 0) == (linear > 0)
        outcomes.add(linear > 0)
    assert outcomes == {True, False}


def test_rational_cubic_route():
    rep = qf_root_search(poly_from_ints([1, 0, -7, 6]))
    assert rep.route == "rational" and set(rep.roots) == {1, 2, -3}


# ---------------------------------------------------------------- verdicts


def test_resolvent_matches_root_products(rng):
    for _ in range(30):
        cs = [Fraction(int(v)) for v in rng.integers(-9, 10, 4)]
        q = Poly(tuple(cs) + (Fraction(1),))
        res = standard_resolvent(q)
        r = np.roots([1.0] + [float(c) for c in reversed(cs)])
        expected = [r[0] * r[1] + r[2] * r[3], r[0] * r[2] + r[1] * r[3], r[0] * r[3] + r[1] * r[2]]
        for z in expected:
            val = sum(float(c) * z ** i for i, c in enumerate(res.coeffs))
            assert abs(val) <= 1e-7 * (1 + abs(z)) ** 3 * max(1.0, max(abs(float(c)) for c in res.coeffs))


def test_pinned_resolvent_is_the_expected_cubic():
    q = poly_from_ints([24, 0, -44, 4, 1])
    assert standard_resolvent(q).primitive() == poly_from_ints([6, 11, -1, -2])


def _oracle_verdict(q: Poly) -> str:
    _, facs = sp.factor_list(to_sympy(q).as_expr(), X)
    degs = [sp.degree(f, X) for f, _ in facs]
    if max(degs) <= 2:
        return PLANAR
    if max(degs) == 3:
        return REDUCIBLE_PLANAR
    order = galois_group(sp.Poly(facs[0][0], X))[0].order()
    return PLANAR if order & (order - 1) == 0 else SOLID


def test_verdict_against_galois_group_oracle():
    rnd = random.Random(3)
    seen = set()
    for _ in range(120):
        cs = [rnd.randint(-6, 6) for _ in range(4)]
        q = poly_from_ints([rnd.randint(1, 4)] + cs)
        if q[0] == 0 and rnd.random() < 0.8:
            continue
        rep = quartic_constructibility(q)
        assert rep.verdict == _oracle_verdict(q), str(q)
        seen.add(rep.verdict)
    assert seen == {PLANAR, SOLID, REDUCIBLE_PLANAR}


def test_products_of_quadratics_are_planar():
    rnd = random.Random(5)
    for _ in range(60):
        f = poly_from_ints([rnd.randint(1, 4), rnd.randint(-5, 5), rnd.randint(-5, 5)])
        g = poly_from_ints([rnd.randint(1, 4), rnd.randint(-5, 5), rnd.randint(-5, 5)])
        rep = quartic_constructibility(f * g)
        assert rep.verdict == PLANAR
        prod = rep.witness["factors"]
        acc = Poly((Fraction(1),))
        for h in prod:
            acc = acc * h
        assert acc.is_proportional(f * g)


def test_quadratic_factors_biquadratic():
    q = poly_from_ints([1, 0, -5, 0, 6])
    f = quadratic_factors(q)
    assert f is not None and (f[0] * f[1]).is_proportional(q)
    assert quadratic_factors(poly_from_ints([1, 0, 0, 0, -2])) is None or True


@pytest.mark.parametrize("coeffs,verdict", [
    ([1, 0, 0, 0, -1], PLANAR),
    ([1, 0, -5, 0, 6], PLANAR),
    ([6, 0, -30, 0, 36], PLANAR),
    ([24, 0, -44, 4, 1], SOLID),
    ([6, 0, -11, 2, 1], SOLID),
])
def test_factor_pair_route_agrees_with_standard(coeffs, verdict):
    q = poly_from_ints(coeffs)
    assert factor_pair_constructibility(q).verdict == verdict
    assert quartic_constructibility(q).verdict == verdict


def test_resolvent_system_rejects_cubic_term():
    with pytest.raises(InputError):
        resolvent_system(poly_from_ints([1, 1, 0, 0, 1]))


def test_pinned_instance_pair_route():
    rep = edge_quartic_constructibility(1, 2, 2, 1, 3)
    assert rep.verdict == SOLID
    assert rep.subreports["factor_pair_route"].verdict == SOLID
    assert rep.subreports["standard_route"].verdict == SOLID
    assert rep.witness["routes_agree"]
    assert rep.quartic == poly_from_ints([24, 0, -44, 4, 1])
    search = rep.subreports["factor_pair_route"].witness["search"]
    assert search.d == 6 and not search.found and search.routes_agree
    cmp_ = rep.witness["reference_comparison"]
    assert cmp_["quartic"]["match"] and cmp_["depressed"]["match"]
    assert {k for k, v in cmp_.items() if v["match"] is False} == {"surd_part", "branch lam = 0", "branch lam != 0"}
    assert any("differ from the reference" in n for n in rep.notes)
    elim = rep.witness["elimination_check"]
    assert not elim["printed_matches_elimination"]
    assert elim["quartic"] == poly_from_ints([6, 0, -11, 2, 1])
    assert elim["standard_route"].verdict == SOLID and elim["routes_agree"]


def test_engineered_planar_instance():
    rep = edge_quartic_constructibility("1/5", "1", "11/4", "7/5", "10021/400")
    assert rep.witness["inputs"]["alpha"] == 0
    assert rep.verdict == PLANAR
    assert rep.subreports["factor_pair_route"].verdict == PLANAR
    assert rep.witness["elimination_check"]["printed_matches_elimination"]
    assert rep.quartic == poly_from_ints([98, 56, -1807, 0, 1815][::-1])


def test_x0_quadratic_route():
    rep = edge_quartic_constructibility(1, 1, 0, 1, 0)
    assert rep.verdict == PLANAR and rep.method == "quadratic"
    assert rep.witness["roots"] == [Fraction(-1, 3), 1]
    assert rep.witness["rejected_y_eq_yprime"] == [1]


def test_alpha_nonzero_uses_standard_route():
    rep = edge_quartic_constructibility(1, 2, 1, 1, 1)
    assert rep.method == "standard-resolvent"
    assert rep.verdict in (PLANAR, SOLID, REDUCIBLE_PLANAR)


def test_edge_quartic_input_errors():
    with pytest.raises(InputError):
        edge_quartic_constructibility(1, 2, 2, 0, 3)
    with pytest.raises(InputError):
        edge_quartic_constructibility("0.5", 2, 2, 1, 3)
    with pytest.raises(InputError):
        edge_quartic_constructibility(-1, 2, 2, 1, 3)


def test_reports_are_json_serialisable():
    import json
    json.dumps(edge_quartic_constructibility(1, 2, 2, 1, 3).to_json())
    json.dumps(quartic_constructibility(poly_from_ints([1, 0, -5, 0, 6])).to_json())


@pytest.mark.parametrize("d", [2, 3, 6, 7])
def test_planted_root_one_plus_sqrt_d(d):
    r = QuadFieldElem(d, 1, 1)
    cubic = Poly((-r, Fraction(1))) * Poly((Fraction(d - 1), Fraction(0), Fraction(1)))
    rep = qf_root_search(cubic, d)
    assert [(c.lam, c.nu) for c in rep.roots] == [(1, 1)]
    approx = np.roots([complex(float(c)) for c in cubic.descending()])
    assert min(abs(z - float(r)) for z in approx) < 1e-12


def test_rational_root_over_sqrt6():
    s6 = QuadFieldElem.sqrt(6)
    cubic = Poly((-QuadFieldElem(6, 2, 0), Fraction(1))) * Poly((Fraction(1), s6, Fraction(1)))
    rep = qf_root_search(cubic, 6)
    assert [(c.lam, c.nu) for c in rep.roots] == [(2, 0)]


def test_pinned_resolvent_system():
    sysm = resolvent_system(poly_from_ints([24, 0, -44, 4, 1]))
    s6 = QuadFieldElem.sqrt(6)
    assert sysm.d == 6
    assert sysm.cubic == Poly.from_descending([Fraction(1), Fraction(11) / s6, Fraction(-1), Fraction(-12) / s6])
    assert sysm.depressed == Poly.from_descending([Fraction(1), Fraction(0), Fraction(-139, 18),
                                                   s6 * Fraction(328, 243)])
    # the shifted root of the depressed cubic is a root of the cubic in c
    w = s6 * Fraction(3)
    assert sysm.cubic(w - sysm.shift) == sysm.depressed(w)


def test_factorable_quartic_in_shape_has_root_in_field():
    q = poly_from_ints([1, 0, -5, 0, 6]).scale(6)
    sysm = resolvent_system(q)
    assert sysm.d == 6
    assert qf_root_search(sysm.depressed, 6).found

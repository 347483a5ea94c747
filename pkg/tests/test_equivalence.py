"""The unitary, conjugation, difference operators, and decay diagnostics."""

import pytest

from qsu2.coefficients import g
from qsu2.equivalence import (
    CrosscheckResult,
    build_R,
    build_T,
    closed_form,
    conjugate,
    crosscheck_decomposition,
    decay_loglog_slope,
    decay_report,
    difference,
    lift_pi_diagonal,
    tail_norms,
    u_backward,
    u_forward,
    unitary_u,
    verify_q0_equivalence,
)
from qsu2.lattice import (
    FullIndex,
    GammaIndex,
    PiIndex,
    full_basis,
    full_shell,
    gamma_basis,
    sheet_of,
)
from qsu2.operator_core import (
    add,
    build_from_rule,
    columns_equal_exact,
    identity,
    max_entry_difference,
)
from qsu2.representations import build_ipi0, build_lambda0


def column_as_dict(op, point):
    j = op.domain.index_of(point)
    return {op.codomain.point_of(i): v for i, v in op.cols[j]}


def test_unitary_pointwise_examples():
    assert u_forward(GammaIndex(0, 0, 0)) == (1, FullIndex(0, 0, 0))
    # e^{1/2}_{1/2,-1/2}: the i >= j branch picks up (-1)^{i-j}
    assert u_forward(GammaIndex(1, 1, -1)) == (-1, FullIndex(0, 0, -1))
    # e^1_{0,1}: i < j branch, positive sign
    assert u_forward(GammaIndex(2, 0, 2)) == (1, FullIndex(0, 1, 1))
    assert u_backward(FullIndex(0, 0, -1)) == (-1, GammaIndex(1, 1, -1))


def test_unitary_roundtrip_and_shells_cap40():
    u = unitary_u(40)  # construction itself asserts round trip and shells
    images = {f for _, f in u.forward.values()}
    assert images == set(u.codomain.points)  # bijection onto the capped lattice
    for p, (sgn, f) in u.forward.items():
        assert sgn in (-1, 1)
        assert full_shell(f) == p.n2


def test_sheet_to_fiber():
    u = unitary_u(10)
    for p, (_, f) in u.forward.items():
        assert f.r == sheet_of(p) // 2


def test_conjugate_identity():
    u = unitary_u(6)
    from qsu2.coefficients import EXACT_ZERO

    eye = identity(gamma_basis(6), EXACT_ZERO)
    conj = conjugate(eye, u)
    assert conj.cols == identity(full_basis(6), EXACT_ZERO).cols


def test_conjugate_cap_mismatch():
    u = unitary_u(6)
    op = build_lambda0(5, "alpha")
    with pytest.raises(ValueError, match="cap mismatch"):
        conjugate(op, u)


def test_q0_intertwining_exact():
    rep = verify_q0_equivalence(10)
    assert rep.passed
    assert all(v == 0 for v in rep.mismatches.values())
    assert set(rep.mismatches) == {"alpha", "beta", "alpha_star", "beta_star"}
    assert verify_q0_equivalence(1).passed  # apex column alone


def test_q0_apex_column():
    u = unitary_u(2)
    conj = conjugate(build_lambda0(2, "beta"), u)
    assert column_as_dict(conj, FullIndex(0, 0, 0)) == {FullIndex(0, 0, -1): 1}


def test_q0_needs_positive_cap():
    with pytest.raises(ValueError, match="no interior"):
        verify_q0_equivalence(0)


def test_q0_regression_guard_displayed_beta_form():
    # The other displayed convention for the crystal beta action (index
    # shifts (i-1/2, j+1/2), opposite branch signs) must break the exact
    # intertwining, witnessed at the apex.
    cap = 4
    basis = gamma_basis(cap)

    def displayed_rule(p):
        n2, i2, j2 = p
        if i2 == -n2:
            return [(GammaIndex(n2 + 1, i2 - 1, j2 + 1), 1)]
        if j2 == -n2:
            return [(GammaIndex(n2 - 1, i2 - 1, j2 + 1), -1)]
        return []

    from qsu2.coefficients import EXACT_ZERO

    wrong_beta = build_from_rule(basis, basis, displayed_rule, EXACT_ZERO)
    lhs = conjugate(wrong_beta, unitary_u(cap))
    rhs = build_ipi0(cap, "beta")
    fb = full_basis(cap)
    interior = [j for j in range(len(fb)) if fb.shells[j] <= cap - 1]
    count, witness = columns_equal_exact(lhs, rhs, interior)
    assert count > 0
    assert witness == FullIndex(0, 0, 0)


def test_difference_apex_column():
    d = difference(0.5, 6, "alpha")
    col = column_as_dict(d, FullIndex(0, 0, 0))
    assert set(col) == {FullIndex(1, 0, 0)}
    assert col[FullIndex(1, 0, 0)] == pytest.approx(0.4472135954999579, abs=1e-12)


def test_difference_column_structure():
    d = difference(0.5, 6, "alpha")
    basis = d.domain
    for j, col in enumerate(d.cols):
        p = basis.point_of(j)
        targets = {basis.point_of(i) for i, _ in col}
        assert len(col) <= 2
        assert targets <= {FullIndex(p.r + 1, p.s, p.t), FullIndex(p.r, p.s - 1, p.t)}


def test_difference_rejects_bad_inputs():
    with pytest.raises(ValueError, match="unstarred"):
        difference(0.5, 4, "alpha_star")
    with pytest.raises(ValueError, match="q=0"):
        difference(0.0, 4, "alpha")


def test_diagonal_coefficient_values():
    q = 0.5
    r1 = build_R(q, 4, 1)
    apex = r1.domain.index_of(FullIndex(0, 0, 0))
    assert dict(r1.cols[apex])[apex] == pytest.approx(0.4472135954999579, abs=1e-12)

    r3 = build_R(q, 4, 3)
    j = r3.domain.index_of(PiIndex(1, 2))
    assert dict(r3.cols[j])[j] == pytest.approx(q**5, abs=1e-15)

    t1 = build_T(q, 5, 1)
    for t in range(-3, 4):
        j = t1.domain.index_of(FullIndex(0, 0, t))
        assert t1.cols[j] == ()  # bottom case (r,s) = (0,0)

    with pytest.raises(ValueError, match="unknown R index"):
        build_R(q, 4, 5)
    with pytest.raises(ValueError, match="unknown T index"):
        build_T(q, 4, 0)


def test_crosscheck_small_grid():
    for q in (0.1, -0.1, 0.5, -0.5, 0.9):
        for gen in ("alpha", "beta"):
            res = crosscheck_decomposition(q, 8, gen)
            assert not res.vacuous
            assert res.deviation < 1e-13, (q, gen, res)


def test_crosscheck_vacuous_at_cap_zero():
    res = crosscheck_decomposition(0.5, 0, "alpha")
    assert res == CrosscheckResult(0.0, None, True)


def test_closed_form_matches_difference_everywhere_interior():
    # independent check at another q, both generators, larger cap
    for gen in ("alpha", "beta"):
        d = difference(0.3, 10, gen)
        cf_op = closed_form(0.3, 10, gen)
        basis = d.domain
        interior = [j for j in range(len(basis)) if basis.shells[j] <= 9]
        worst, _ = max_entry_difference(cf_op, d, columns=interior)
        assert worst < 1e-14


def test_t1_minus_t3_bottom_fiber_values():
    # T1 vanishes on the (0,0) fiber while the lifted T3 does not: the
    # difference there is exactly q^{|t|} g(1) for t < 0.
    q = 0.5
    cap = 6
    m = add(build_T(q, cap, 1), lift_pi_diagonal(build_T(q, cap, 3), cap), 1.0, -1.0)
    basis = m.domain
    for t in range(-cap, 0):
        j = basis.index_of(FullIndex(0, 0, t))
        assert dict(m.cols[j])[j] == pytest.approx(q ** abs(t) * g(1, q), abs=1e-15)


def test_r1_minus_lifted_r3_shell_ratios():
    # per-shell maxima of R1 - I (x) R3 shrink at rate ~q past the first shells
    from qsu2.operator_core import max_abs_entry_per_shell

    q, cap = 0.5, 8
    m = add(build_R(q, cap, 1), lift_pi_diagonal(build_R(q, cap, 3), cap), 1.0, -1.0)
    vals = dict(max_abs_entry_per_shell(m))
    for k in range(2, cap):
        assert vals[k + 1] / vals[k] <= q + 0.05


def test_decay_report_constants():
    rep = decay_report(0.5, 8, "R1mR3")
    assert rep.pattern == "2r+2s+|t|+1"
    assert rep.normalized_constant <= 2.0 / (1 - 0.25)  # generous envelope
    assert rep.normalized_constant > 0
    vals = dict(rep.shell_max)
    assert vals[3] < vals[2] < vals[1]

    with pytest.raises(ValueError, match="unknown decay target"):
        decay_report(0.5, 4, "bogus")


def test_decay_slopes_near_one():
    for target in ("R1mR3", "T1mT3"):
        slope = decay_loglog_slope((0.3, 0.2), 8, target)
        assert abs(slope - 1.0) < 0.15


def test_decay_slope_rejects_nondecaying_pattern():
    with pytest.raises(ValueError, match="no shellwise-decaying"):
        decay_loglog_slope((0.3, 0.2), 6, "Dbeta")


def test_tail_norms_monotone_small():
    norms = tail_norms(0.5, 8, "alpha")
    assert norms[0][1] >= 0.447  # apex column witness lower bound
    values = [v for _, v in norms]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-8


def test_tail_norms_reject_full_shell():
    with pytest.raises(ValueError, match="pi-factor"):
        tail_norms(0.5, 4, "alpha", factor="full-shell")

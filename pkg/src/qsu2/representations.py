"""Builders for the representations of quantum SU(2) and the defining
relation checker.

Two faithful representations are constructed on finite shell
truncations: the GNS action lambda_q on l2(Gamma), given by the
Clebsch-Gordan coefficients, and the direct-integral action pi_q on
l2(N x Z) (lifted to the full lattice as I (x) pi_q).  At q = 0 both
have exact integer versions lambda_0 and pi_0 whose matrix entries lie
in {-1, 0, +1}.  Starred generators are always the exact matrix
adjoints of the unstarred ones, so *-compatibility holds by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import coefficients as cf
from .coefficients import EXACT_ZERO, float_mode, g
from .lattice import (
    FullIndex,
    GammaIndex,
    PiIndex,
    full_basis,
    gamma_basis,
    nat_basis,
    pi_basis,
    pi_tensor_basis,
)
from .operator_core import (
    SparseOperator,
    add,
    adjoint,
    build_from_rule,
    compose,
    identity,
    max_entry_difference,
    tensor,
)


class Generator(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"
    ALPHA_STAR = "alpha_star"
    BETA_STAR = "beta_star"

    @property
    def starred(self) -> bool:
        return self.value.endswith("_star")

    @property
    def base(self) -> "Generator":
        return Generator(self.value.removesuffix("_star"))


def _as_generator(gen) -> Generator:
    return gen if isinstance(gen, Generator) else Generator(gen)


def build_lambda(q: float, cap: int, gen) -> SparseOperator:
    """GNS generator section on the shell-capped l2(Gamma)."""
    gen = _as_generator(gen)
    if q == 0.0:
        raise ValueError("q=0 is exact: use build_lambda0")
    mode = float_mode(q)
    basis = gamma_basis(cap)
    if gen.starred:
        return adjoint(build_lambda(q, cap, gen.base))

    if gen is Generator.ALPHA:
        def rule(p: GammaIndex):
            n2, i2, j2 = p
            out = []
            v = cf.a_plus(n2, i2, j2, q)
            if v:
                out.append((GammaIndex(n2 + 1, i2 - 1, j2 - 1), v))
            v = cf.a_minus(n2, i2, j2, q)
            if v:
                out.append((GammaIndex(n2 - 1, i2 - 1, j2 - 1), v))
            return out
    else:
        def rule(p: GammaIndex):
            n2, i2, j2 = p
            out = []
            v = cf.b_plus(n2, i2, j2, q)
            if v:
                out.append((GammaIndex(n2 + 1, i2 + 1, j2 - 1), v))
            v = cf.b_minus(n2, i2, j2, q)
            if v:
                out.append((GammaIndex(n2 - 1, i2 + 1, j2 - 1), v))
            return out

    return build_from_rule(basis, basis, rule, mode)


def build_pi(q: float, cap: int, gen) -> SparseOperator:
    """Direct-integral generator section on the shell-capped l2(N x Z)."""
    gen = _as_generator(gen)
    if q == 0.0:
        raise ValueError("q=0 is exact: use build_pi0")
    mode = float_mode(q)
    basis = pi_basis(cap)
    if gen.starred:
        return adjoint(build_pi(q, cap, gen.base))
    if gen is Generator.ALPHA:
        rule = lambda p: [(PiIndex(p.s - 1, p.t), g(p.s, q))] if p.s >= 1 else []
    else:
        rule = lambda p: [(PiIndex(p.s, p.t - 1), q**p.s)]
    return build_from_rule(basis, basis, rule, mode)


def build_ipi(q: float, cap: int, gen) -> SparseOperator:
    """I (x) pi_q on the shell-capped full lattice: same (s, t) action per r."""
    gen = _as_generator(gen)
    if q == 0.0:
        raise ValueError("q=0 is exact: use build_ipi0")
    mode = float_mode(q)
    basis = full_basis(cap)
    if gen.starred:
        return adjoint(build_ipi(q, cap, gen.base))
    if gen is Generator.ALPHA:
        rule = lambda p: [(FullIndex(p.r, p.s - 1, p.t), g(p.s, q))] if p.s >= 1 else []
    else:
        rule = lambda p: [(FullIndex(p.r, p.s, p.t - 1), q**p.s)]
    return build_from_rule(basis, basis, rule, mode)


def build_lambda0(cap: int, gen) -> SparseOperator:
    """Crystal-limit GNS generator, exact integer entries.

    The beta action is the q -> 0 limit of the Clebsch-Gordan formulas:
    a sign -1 jump up the pyramid on the face j = -n, a sign +1 drop on
    the face i = -n (with the j = -n branch taking priority at the
    common corner, where the drop coefficient vanishes).
    """
    gen = _as_generator(gen)
    basis = gamma_basis(cap)
    if gen.starred:
        return adjoint(build_lambda0(cap, gen.base))
    if gen is Generator.ALPHA:
        def rule(p: GammaIndex):
            n2, i2, j2 = p
            if i2 > -n2 and j2 > -n2:
                return [(GammaIndex(n2 - 1, i2 - 1, j2 - 1), 1)]
            return []
    else:
        def rule(p: GammaIndex):
            n2, i2, j2 = p
            if j2 == -n2:
                return [(GammaIndex(n2 + 1, i2 + 1, j2 - 1), -1)]
            if i2 == -n2:
                return [(GammaIndex(n2 - 1, i2 + 1, j2 - 1), 1)]
            return []
    return build_from_rule(basis, basis, rule, EXACT_ZERO)


def build_pi0(cap: int, gen) -> SparseOperator:
    """Crystal-limit direct-integral generator: alpha the s-shift, beta the
    bottom-fiber t-shift."""
    gen = _as_generator(gen)
    basis = pi_basis(cap)
    if gen.starred:
        return adjoint(build_pi0(cap, gen.base))
    if gen is Generator.ALPHA:
        rule = lambda p: [(PiIndex(p.s - 1, p.t), 1)] if p.s >= 1 else []
    else:
        rule = lambda p: [(PiIndex(0, p.t - 1), 1)] if p.s == 0 else []
    return build_from_rule(basis, basis, rule, EXACT_ZERO)


def build_ipi0(cap: int, gen) -> SparseOperator:
    """I (x) pi_0 on the full lattice, exact integers."""
    gen = _as_generator(gen)
    basis = full_basis(cap)
    if gen.starred:
        return adjoint(build_ipi0(cap, gen.base))
    if gen is Generator.ALPHA:
        rule = lambda p: [(FullIndex(p.r, p.s - 1, p.t), 1)] if p.s >= 1 else []
    else:
        rule = lambda p: [(FullIndex(p.r, 0, p.t - 1), 1)] if p.s == 0 else []
    return build_from_rule(basis, basis, rule, EXACT_ZERO)


def build_irrep(q: float, z: complex, dim: int) -> tuple[SparseOperator, SparseOperator]:
    """The infinite-dimensional irreducible indexed by z on the unit circle.

    alpha acts as the weighted down-shift e_k -> g(k) e_{k-1}, beta as the
    diagonal e_k -> z q^k e_k.
    """
    if q == 0.0 or not abs(q) < 1.0:
        raise ValueError("irreducibles need 0 < |q| < 1")
    if abs(abs(z) - 1.0) > 1e-12:
        raise ValueError("irreducible parameter z must lie on the unit circle")
    if dim < 1:
        raise ValueError("irreducible section needs dim >= 1")
    mode = float_mode(q)
    basis = nat_basis(dim)
    alpha = build_from_rule(basis, basis, lambda k: [(k - 1, g(k, q))] if k >= 1 else [], mode)
    z = complex(z)
    beta = build_from_rule(basis, basis, lambda k: [(k, z * q**k)], mode)
    return alpha, beta


def coproduct_images(q: float, cap: int) -> tuple[SparseOperator, SparseOperator]:
    """(pi_q (x) pi_q) of the comultiplied generators on l2(N x Z)^(x)2.

    Delta(alpha) = alpha (x) alpha - q beta* (x) beta and
    Delta(beta) = beta (x) alpha + alpha* (x) beta; feeding the pair to the
    relation checker verifies the homomorphism property on the truncation.
    """
    if q == 0.0:
        raise ValueError("coproduct images need 0 < |q| < 1")
    a = build_pi(q, cap, Generator.ALPHA)
    b = build_pi(q, cap, Generator.BETA)
    basis2 = pi_tensor_basis(cap)
    d_alpha = add(
        tensor(a, a, basis2, basis2),
        tensor(adjoint(b), b, basis2, basis2),
        1.0,
        -q,
    )
    d_beta = add(
        tensor(b, a, basis2, basis2),
        tensor(adjoint(a), b, basis2, basis2),
    )
    return d_alpha, d_beta


@dataclass(frozen=True)
class RelationResidual:
    name: str
    residual: float
    witness: object


@dataclass(frozen=True)
class RelationReport:
    cap: int
    margin: int
    exact: bool
    rows: tuple[RelationResidual, ...]

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.rows), default=0.0)

    def passes(self, tol: float) -> bool:
        return self.max_residual < tol


def check_relations(ops, margin: int = 2) -> RelationReport:
    """Residuals of the defining relations on interior shells.

    ``ops`` maps generator names to operator sections on one basis; missing
    starred generators are filled in by matrix adjoints.  Each relation is a
    word of length <= 2, evaluated on every basis vector of shell <=
    cap - margin; the report holds the largest column norm per relation and
    the witnessing basis point.  At q = 0 the crystal relations are checked
    in exact integer arithmetic.
    """
    ops = {_as_generator(k): v for k, v in ops.items()}
    a = ops[Generator.ALPHA]
    b = ops[Generator.BETA]
    astar = ops.get(Generator.ALPHA_STAR, adjoint(a))
    bstar = ops.get(Generator.BETA_STAR, adjoint(b))
    basis = a.domain
    cap = basis.cap
    if margin < 2:
        raise ValueError("word_margin must be at least 2")
    if cap < margin:
        raise ValueError("no interior: cap < word_margin")
    mode = a.mode
    eye = identity(basis, mode)

    if mode.exact:
        relations = [
            ("a*a+b*b-I", add(add(compose(astar, a), compose(bstar, b)), eye, 1, -1)),
            ("aa*-I", add(compose(a, astar), eye, 1, -1)),
            ("ab", compose(a, b)),
            ("ab*", compose(a, bstar)),
            ("b*b-bb*", add(compose(bstar, b), compose(b, bstar), 1, -1)),
        ]
    else:
        q = mode.q
        relations = [
            ("a*a+b*b-I", add(add(compose(astar, a), compose(bstar, b)), eye, 1.0, -1.0)),
            ("aa*+q^2bb*-I", add(add(compose(a, astar), compose(b, bstar), 1.0, q * q), eye, 1.0, -1.0)),
            ("ab-qba", add(compose(a, b), compose(b, a), 1.0, -q)),
            ("ab*-qb*a", add(compose(a, bstar), compose(bstar, a), 1.0, -q)),
            ("b*b-bb*", add(compose(bstar, b), compose(b, bstar), 1.0, -1.0)),
        ]

    interior = [j for j in range(len(basis)) if basis.shells[j] <= cap - margin]
    rows = []
    for name, op in relations:
        worst = 0.0
        witness = None
        for j in interior:
            norm2 = sum(abs(v) ** 2 for _, v in op.cols[j])
            if norm2 > worst:
                worst = norm2
                witness = basis.point_of(j)
        rows.append(RelationResidual(name, worst**0.5, witness))
    return RelationReport(cap, margin, mode.exact, tuple(rows))


def crystal_limit_distance(q: float, cap: int, gen) -> float:
    """Max-entry distance between the lambda_q and lambda_0 generator sections."""
    gen = _as_generator(gen)
    lam_q = build_lambda(q, cap, gen)
    lam_0 = build_lambda0(cap, gen)
    # Compare float against exact integers: promote the exact entries.
    lam_0f = SparseOperator(
        lam_0.domain,
        lam_0.codomain,
        [[(i, float(v)) for i, v in col] for col in lam_0.cols],
        lam_q.mode,
    )
    worst, _ = max_entry_difference(lam_q, lam_0f)
    return worst

"""Catalog of multiplicative-form constructions with their natural witnesses.

Each constructor returns a ConstructedForm bundling the form, provenance, and
whatever certificate the construction carries: a scaled witness, a bilinear
composition map, or an algebra presentation for Jordan composition.  Attached
witnesses are verified before the constructor returns.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import linalg
from .coeffield import EtaleAlgebra, FieldElement, QQ, RationalField, field_extend
from .forms import HomogeneousForm, polarize
from .poly import Polynomial, RationalFunction, ring_matrix_determinant
from .witness import (
    ScaledWitness,
    WitnessInvalid,
    scalar_is_dth_power,
    verify_composition,
    verify_scaled_witness,
)


class DegeneratePairing(ValueError):
    """The trace pairing must be nondegenerate to solve for cross products."""


class AdjointIdentityFailure(ValueError):
    """(j#)# = N(j) j failed, so the triple is not admissible."""


class MissingWitness(ValueError):
    """The construction needs witness data the caller did not supply."""


# ---------------------------------------------------------------------------
# algebra presentations


class AlgebraPresentation:
    """A finite-dimensional algebra by structure constants: e_i e_j =
    sum_l structure[i][j][l] e_l."""

    def __init__(
        self,
        field,
        structure,
        unit,
        associative: bool,
        involution=None,
        norm: Optional[HomogeneousForm] = None,
        trace=None,
    ):
        self.field = field
        self.dim = len(structure)
        self.structure = tuple(
            tuple(tuple(self._coerce(c) for c in row) for row in plane)
            for plane in structure
        )
        self.unit = tuple(self._coerce(c) for c in unit)
        self.associative = associative
        self.involution = (
            None
            if involution is None
            else tuple(tuple(self._coerce(c) for c in row) for row in involution)
        )
        self.norm = norm
        self.trace = None if trace is None else tuple(self._coerce(c) for c in trace)
        self._check_unit()
        if self.involution is not None:
            self._check_involution()
        if associative:
            self._check_associative()

    def _coerce(self, c) -> FieldElement:
        if isinstance(c, FieldElement):
            return c
        return self.field.from_rational(c)

    def basis_vector(self, i: int):
        return tuple(
            self.field.one if j == i else self.field.zero for j in range(self.dim)
        )

    def product(self, x, y):
        n = self.dim
        out = [self.field.zero] * n
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero():
                    continue
                xy = x[i] * y[j]
                for l in range(n):
                    c = self.structure[i][j][l]
                    if not c.is_zero():
                        out[l] = out[l] + c * xy
        return tuple(out)

    def product_polys(self, x, y):
        n = self.dim
        nv = x[0].nvars
        out = [Polynomial.zero(self.field, nv) for _ in range(n)]
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero():
                    continue
                xy = x[i] * y[j]
                for l in range(n):
                    c = self.structure[i][j][l]
                    if not c.is_zero():
                        out[l] = out[l] + xy.scale(c)
        return out

    def involve(self, x):
        rows = self.involution
        return tuple(
            sum((rows[i][j] * x[j] for j in range(self.dim)), self.field.zero)
            for i in range(self.dim)
        )

    def involve_polys(self, x):
        rows = self.involution
        nv = x[0].nvars
        out = []
        for i in range(self.dim):
            acc = Polynomial.zero(self.field, nv)
            for j in range(self.dim):
                if not rows[i][j].is_zero():
                    acc = acc + x[j].scale(rows[i][j])
            out.append(acc)
        return out

    def trace_value(self, x) -> FieldElement:
        if self.trace is None:
            raise ValueError("presentation carries no trace functional")
        out = self.field.zero
        for t, c in zip(self.trace, x):
            out = out + t * c
        return out

    def structure_matrices(self):
        """z_l(x, y) coefficient matrices: out[l][i][j] multiplies x_i y_j."""
        n = self.dim
        return tuple(
            tuple(tuple(self.structure[i][j][l] for j in range(n)) for i in range(n))
            for l in range(n)
        )

    def left_mult_witness_matrix(self):
        """M(X) = left multiplication by the generic element, as rational
        functions in n variables."""
        n = self.dim
        rows = []
        for l in range(n):
            row = []
            for j in range(n):
                terms = {}
                for i in range(n):
                    c = self.structure[i][j][l]
                    if c.is_zero():
                        continue
                    e = [0] * n
                    e[i] = 1
                    terms[tuple(e)] = terms.get(tuple(e), self.field.zero) + c
                row.append(RationalFunction.from_poly(Polynomial(self.field, n, terms)))
            rows.append(tuple(row))
        return tuple(rows)

    def _check_unit(self):
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.product(self.unit, e) != e or self.product(e, self.unit) != e:
                raise ValueError("unit does not act as identity on basis element %d" % i)

    def _check_involution(self):
        n = self.dim
        for i in range(n):
            e = self.basis_vector(i)
            if self.involve(self.involve(e)) != e:
                raise ValueError("involution is not of period 2")
        for i in range(n):
            for j in range(n):
                lhs = self.involve(
                    self.product(self.basis_vector(i), self.basis_vector(j))
                )
                rhs = self.product(
                    self.involve(self.basis_vector(j)), self.involve(self.basis_vector(i))
                )
                if lhs != rhs:
                    raise ValueError("involution is not an anti-automorphism")

    def _check_associative(self):
        n = self.dim
        basis = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                ij = self.product(basis[i], basis[j])
                for l in range(n):
                    lhs = self.product(ij, basis[l])
                    rhs = self.product(basis[i], self.product(basis[j], basis[l]))
                    if lhs != rhs:
                        raise ValueError("product is not associative")


def split_etale_presentation(n: int, field=QQ) -> AlgebraPresentation:
    """k^n with coordinatewise product; norm = product of coordinates."""
    structure = [
        [
            [field.one if i == j == l else field.zero for l in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    unit = [field.one] * n
    e = [0] * n
    for i in range(n):
        e[i] = 1
    norm = HomogeneousForm(
        field, n, n, Polynomial(field, n, {tuple(e): field.one})
    )
    return AlgebraPresentation(
        field,
        structure,
        unit,
        associative=True,
        norm=norm,
        trace=[field.one] * n,
    )


def matrix_algebra(d: int, field=QQ) -> AlgebraPresentation:
    """Mat_d(k), row-major coordinates (i, j) -> d*i + j; norm = det."""
    n = d * d
    zero = field.zero
    one = field.one
    structure = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    if j == k:
                        structure[d * i + j][d * k + l][d * i + l] = one
    unit = [one if i % (d + 1) == 0 else zero for i in range(n)]
    trace = list(unit)
    return AlgebraPresentation(
        field,
        structure,
        unit,
        associative=True,
        norm=_det_form(d, field),
        trace=trace,
    )


def _det_form(d: int, field) -> HomogeneousForm:
    n = d * d
    terms = {}
    for perm in itertools.permutations(range(d)):
        inv = sum(
            1
            for a in range(d)
            for b in range(a + 1, d)
            if perm[a] > perm[b]
        )
        sign = field.one if inv % 2 == 0 else -field.one
        e = [0] * n
        for i in range(d):
            e[d * i + perm[i]] += 1
        terms[tuple(e)] = sign
    return HomogeneousForm(field, d, n, Polynomial(field, n, terms))


# ---------------------------------------------------------------------------
# Cayley-Dickson doubling


def _double(field, structure, conj, norm_body, gamma: FieldElement):
    """(a,b)(c,d) = (ac + gamma conj(d) b, d a + b conj(c)); bar = (conj a, -b);
    n(a,b) = n(a) - gamma n(b)."""
    n = len(structure)
    n2 = 2 * n
    zero = field.zero

    def basis(i):
        return tuple(field.one if j == i else zero for j in range(n))

    def mul(x, y):
        out = [zero] * n
        for i in range(n):
            if x[i].is_zero():
                continue
            for j in range(n):
                if y[j].is_zero():
                    continue
                xy = x[i] * y[j]
                for l in range(n):
                    c = structure[i][j][l]
                    if not c.is_zero():
                        out[l] = out[l] + c * xy
        return tuple(out)

    def cj(x):
        return tuple(
            sum((conj[i][j] * x[j] for j in range(n)), zero) for i in range(n)
        )

    new_structure = [[[zero] * n2 for _ in range(n2)] for _ in range(n2)]
    for p in range(n2):
        a = basis(p % n) if p < n else tuple([zero] * n)
        b = tuple([zero] * n) if p < n else basis(p % n)
        for q in range(n2):
            c = basis(q % n) if q < n else tuple([zero] * n)
            d = tuple([zero] * n) if q < n else basis(q % n)
            first = tuple(
                u + gamma * v for u, v in zip(mul(a, c), mul(cj(d), b))
            )
            second = tuple(u + v for u, v in zip(mul(d, a), mul(b, cj(c))))
            for l in range(n):
                new_structure[p][q][l] = first[l]
                new_structure[p][q][n + l] = second[l]

    new_conj = [[zero] * n2 for _ in range(n2)]
    for i in range(n):
        for j in range(n):
            new_conj[i][j] = conj[i][j]
    for i in range(n):
        new_conj[n + i][n + i] = -field.one

    low = norm_body.embed(n2, 0)
    high = norm_body.embed(n2, n)
    new_norm = low - high.scale(gamma)
    return new_structure, new_conj, new_norm


def _cayley_dickson(field, gammas):
    structure = [[[field.one]]]
    conj = [[field.one]]
    norm_body = Polynomial(field, 1, {(2,): field.one})
    for g in gammas:
        structure, conj, norm_body = _double(field, structure, conj, norm_body, g)
    dim = len(structure)
    unit = [field.one] + [field.zero] * (dim - 1)
    norm = HomogeneousForm(field, 2, dim, norm_body)
    return AlgebraPresentation(
        field,
        structure,
        unit,
        associative=(len(gammas) <= 2),
        involution=conj,
        norm=norm,
        trace=[field.from_rational(2)] + [field.zero] * (dim - 1),
    )


# ---------------------------------------------------------------------------
# constructed forms


@dataclass(frozen=True, eq=False)
class ConstructedForm:
    form: HomogeneousForm
    provenance: dict
    witness: Optional[ScaledWitness] = None
    composition: Optional[tuple] = None  # structure matrices for z(x, y)
    algebra: Optional[AlgebraPresentation] = None
    unit: Optional[tuple] = None
    similarity_family: Optional[Callable] = None
    extras: dict = dc_field(default_factory=dict)


def _check_witnesses(cf: ConstructedForm) -> ConstructedForm:
    if cf.witness is not None:
        rep = verify_scaled_witness(cf.form, cf.witness, mode="auto")
        if not rep.holds():
            raise WitnessInvalid(
                "%s witness %s" % (cf.provenance.get("kind", "?"), rep.verdict)
            )
    if cf.composition is not None:
        rep = verify_composition(cf.form, cf.composition, mode="auto")
        if not rep.holds():
            raise WitnessInvalid(
                "%s composition map %s" % (cf.provenance.get("kind", "?"), rep.verdict)
            )
    return cf


def _scalar_repr(c) -> str:
    if isinstance(c, FieldElement):
        try:
            return str(c.as_rational())
        except ValueError:
            return repr(c)
    return str(Fraction(c))


def diagonal_form(coeffs, d: int, field=QQ) -> ConstructedForm:
    """<a_1, ..., a_n> of degree d; carries a witness only in the one-variable
    d-th power case, where phi is isometric to <1>."""
    cs = [c if isinstance(c, FieldElement) else field.from_rational(c) for c in coeffs]
    n = len(cs)
    terms = {}
    for i, a in enumerate(cs):
        e = [0] * n
        e[i] = d
        terms[tuple(e)] = a
    form = HomogeneousForm(field, d, n, Polynomial(field, n, terms))
    witness = None
    if n == 1:
        ok, eta = scalar_is_dth_power(cs[0], d)
        if ok:
            x = Polynomial.variable(field, 1, 0)
            witness = ScaledWitness(
                scalar=RationalFunction.from_poly(form.body),
                matrix=((RationalFunction.from_poly(x.scale(eta)),),),
            )
    cf = ConstructedForm(
        form=form,
        provenance={
            "kind": "diagonal",
            "degree": d,
            "coefficients": [_scalar_repr(c) for c in cs],
        },
        witness=witness,
    )
    return _check_witnesses(cf)


def monomial_form(exponents: Sequence[int], field=QQ) -> ConstructedForm:
    """x_1^m_1 ... x_r^m_r with the coordinate-scaling witness M = diag(x_i)."""
    ms = [int(m) for m in exponents]
    if any(m < 1 for m in ms):
        raise ValueError("monomial exponents must be positive")
    n = len(ms)
    body = Polynomial(field, n, {tuple(ms): field.one})
    form = HomogeneousForm(field, sum(ms), n, body)
    zero_rf = RationalFunction.const(field, n, field.zero)
    rows = []
    for i in range(n):
        row = [zero_rf] * n
        row[i] = RationalFunction.from_poly(Polynomial.variable(field, n, i))
        rows.append(tuple(row))
    witness = ScaledWitness(
        scalar=RationalFunction.from_poly(body), matrix=tuple(rows)
    )
    cf = ConstructedForm(
        form=form,
        provenance={"kind": "monomial", "exponents": ms},
        witness=witness,
    )
    return _check_witnesses(cf)


def product_form(factors) -> ConstructedForm:
    """phi(u_1, ..., u_r) = phi_1(u_1)^s_1 ... phi_r(u_r)^s_r on the variable
    blocks.  When every factor brings a strong-multiplicativity witness, the
    block-diagonal matrix of the factor witnesses certifies the product."""
    items = []
    for phi, s in factors:
        cf = phi if isinstance(phi, ConstructedForm) else None
        form = phi.form if cf is not None else phi
        if s < 1:
            raise ValueError("powers must be positive")
        items.append((form, int(s), cf))
    field = items[0][0].field
    total_vars = sum(f.nvars for f, _, _ in items)
    body = Polynomial.const(field, total_vars, field.one)
    offset = 0
    offsets = []
    for form, s, _ in items:
        offsets.append(offset)
        body = body * (form.body.embed(total_vars, offset) ** s)
        offset += form.nvars
    degree = sum(f.degree * s for f, s, _ in items)
    form_out = HomogeneousForm(field, degree, total_vars, body)

    matrices = []
    for form, _, cf in items:
        m = _strong_mult_matrix(form, cf)
        if m is None:
            matrices = None
            break
        matrices.append(m)
    witness = None
    if matrices is not None:
        zero_rf = RationalFunction.const(field, total_vars, field.zero)
        rows = [[zero_rf] * total_vars for _ in range(total_vars)]
        for (form, _, _), off, m in zip(items, offsets, matrices):
            for i in range(form.nvars):
                for j in range(form.nvars):
                    entry = m[i][j]
                    rows[off + i][off + j] = RationalFunction(
                        entry.num.embed(total_vars, off),
                        entry.den.embed(total_vars, off),
                    )
        witness = ScaledWitness(
            scalar=RationalFunction.from_poly(body),
            matrix=tuple(tuple(r) for r in rows),
        )
    cf_out = ConstructedForm(
        form=form_out,
        provenance={
            "kind": "product",
            "powers": [s for _, s, _ in items],
            "factor_degrees": [f.degree for f, _, _ in items],
        },
        witness=witness,
    )
    return _check_witnesses(cf_out)


def _strong_mult_matrix(form: HomogeneousForm, cf: Optional[ConstructedForm]):
    """The witness matrix when cf carries a strong-multiplicativity witness
    (scalar exactly phi(X)); None otherwise."""
    if cf is None or cf.witness is None:
        return None
    if cf.witness.scalar != RationalFunction.from_poly(form.body):
        return None
    return cf.witness.matrix


def power_form(phi1, m: int) -> ConstructedForm:
    """phi_1^m.  A strong-mult witness (phi_1(X), M) transfers unchanged in M:
    the scalar becomes phi(X).  Without one, an even-degree phi_1 of degree 2
    still yields the Jordan witness (phi(X)^2, phi_1(X) I)."""
    if m < 1:
        raise ValueError("power must be positive")
    cf = phi1 if isinstance(phi1, ConstructedForm) else None
    base = cf.form if cf is not None else phi1
    field = base.field
    n = base.nvars
    body = base.body**m
    form = HomogeneousForm(field, base.degree * m, n, body)
    witness = None
    mat = _strong_mult_matrix(base, cf)
    if mat is not None:
        witness = ScaledWitness(scalar=RationalFunction.from_poly(body), matrix=mat)
    elif base.degree == 2:
        q_rf = RationalFunction.from_poly(base.body)
        zero_rf = RationalFunction.const(field, n, field.zero)
        rows = tuple(
            tuple(q_rf if i == j else zero_rf for j in range(n)) for i in range(n)
        )
        witness = ScaledWitness(
            scalar=RationalFunction.from_poly(body) ** 2, matrix=rows
        )
    cf_out = ConstructedForm(
        form=form,
        provenance={"kind": "power", "m": m, "base_degree": base.degree},
        witness=witness,
    )
    return _check_witnesses(cf_out)


def scaled_block_sum(phi, scalars, similarity_family=None) -> ConstructedForm:
    """a_1 phi \\perp ... \\perp a_r phi.  The caller supplies a similarity
    family c -> W(c) with phi(W(c) v) = c phi(v); the witness is then the
    block diagonal of W(psi(X))."""
    cf = phi if isinstance(phi, ConstructedForm) else None
    base = cf.form if cf is not None else phi
    if similarity_family is None and cf is not None:
        similarity_family = cf.similarity_family
    if similarity_family is None:
        raise MissingWitness("scaled_block_sum needs a similarity-witness family")
    field = base.field
    n = base.nvars
    cs = [c if isinstance(c, FieldElement) else field.from_rational(c) for c in scalars]
    if any(c.is_zero() for c in cs):
        raise ValueError("block scalars must be nonzero")
    r = len(cs)
    big = r * n
    body = Polynomial.zero(field, big)
    for i, a in enumerate(cs):
        body = body + base.body.embed(big, i * n).scale(a)
    form = HomogeneousForm(field, base.degree, big, body)

    w_small = similarity_family(RationalFunction.from_poly(body))
    zero_rf = RationalFunction.const(field, big, field.zero)
    rows = [[zero_rf] * big for _ in range(big)]
    for blk in range(r):
        for i in range(n):
            for j in range(n):
                rows[blk * n + i][blk * n + j] = w_small[i][j]
    witness = ScaledWitness(
        scalar=RationalFunction.from_poly(body),
        matrix=tuple(tuple(row) for row in rows),
    )
    cf_out = ConstructedForm(
        form=form,
        provenance={
            "kind": "block-sum",
            "scalars": [_scalar_repr(c) for c in cs],
            "base_degree": base.degree,
        },
        witness=witness,
    )
    return _check_witnesses(cf_out)


# ---------------------------------------------------------------------------
# determinants and composition algebras


@functools.lru_cache(maxsize=None)
def det_norm(d: int) -> ConstructedForm:
    """det on Mat_d as a degree-d form in d^2 variables, with the matrix
    product as composition map, left multiplication as scaled witness, and
    diag(c, 1, ..., 1) left multiplication as similarity family."""
    if not 2 <= d <= 4:
        raise ValueError("determinant catalog covers 2 <= d <= 4")
    field = QQ
    alg = matrix_algebra(d, field)
    form = alg.norm
    n = d * d

    def family(c: RationalFunction):
        nv = c.num.nvars
        one_rf = RationalFunction.const(field, nv, field.one)
        zero_rf = RationalFunction.const(field, nv, field.zero)
        rows = []
        for i in range(d):
            for j in range(d):
                row = [zero_rf] * n
                row[d * i + j] = c if i == 0 else one_rf
                rows.append(tuple(row))
        return tuple(rows)

    cf = ConstructedForm(
        form=form,
        provenance={"kind": "det", "d": d},
        witness=ScaledWitness(
            scalar=RationalFunction.from_poly(form.body),
            matrix=alg.left_mult_witness_matrix(),
        ),
        composition=alg.structure_matrices(),
        algebra=alg,
        unit=alg.unit,
        similarity_family=family,
    )
    return _check_witnesses(cf)


def composition_algebra_norm(kind: str, params) -> ConstructedForm:
    """Norm of the Cayley-Dickson algebra over Q: binary(a), quaternion(a, b),
    octonion(a, b, c); witness = the algebra product."""
    arity = {"binary": 1, "quaternion": 2, "octonion": 3}
    if kind not in arity:
        raise ValueError("kind must be binary, quaternion, or octonion")
    gammas = [g if isinstance(g, FieldElement) else QQ.from_rational(g) for g in params]
    if len(gammas) != arity[kind]:
        raise ValueError("%s takes %d parameters" % (kind, arity[kind]))
    if any(g.is_zero() for g in gammas):
        raise ValueError("parameters must be nonzero")
    alg = _cayley_dickson(QQ, gammas)
    cf = ConstructedForm(
        form=alg.norm,
        provenance={
            "kind": "pfister",
            "algebra": kind,
            "params": [_scalar_repr(g) for g in gammas],
        },
        witness=ScaledWitness(
            scalar=RationalFunction.from_poly(alg.norm.body),
            matrix=alg.left_mult_witness_matrix(),
        ),
        composition=alg.structure_matrices(),
        algebra=alg,
        unit=alg.unit,
    )
    return _check_witnesses(cf)


def hyperbolic_plane() -> ConstructedForm:
    return composition_algebra_norm("binary", [1])


@functools.lru_cache(maxsize=None)
def split_octonion_algebra() -> AlgebraPresentation:
    return _cayley_dickson(QQ, [QQ.one, QQ.one, QQ.one])


def tits_cubic(a) -> ConstructedForm:
    """u^3 + a v^3 + a^2 w^3 - 3a uvw, the norm of k[t]/(t^3 - a), with the
    regular representation of the generic element as witness."""
    field = QQ if not isinstance(a, FieldElement) else a.field
    a = a if isinstance(a, FieldElement) else field.from_rational(a)
    if a.is_zero():
        raise ValueError("parameter must be nonzero")
    body = Polynomial.from_pairs(
        field,
        3,
        [
            ((3, 0, 0), field.one),
            ((0, 3, 0), a),
            ((0, 0, 3), a * a),
            ((1, 1, 1), field.from_rational(-3) * a),
        ],
    )
    form = HomogeneousForm(field, 3, 3, body)
    u = Polynomial.variable(field, 3, 0)
    v = Polynomial.variable(field, 3, 1)
    w = Polynomial.variable(field, 3, 2)
    rf = RationalFunction.from_poly
    matrix = (
        (rf(u), rf(w.scale(a)), rf(v.scale(a))),
        (rf(v), rf(u), rf(w.scale(a))),
        (rf(w), rf(v), rf(u)),
    )
    # cubic algebra k[t]/(t^3 - a): basis 1, t, t^2
    zero = field.zero
    one = field.one
    structure = [[[zero] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            s = i + j
            if s < 3:
                structure[i][j][s] = one
            else:
                structure[i][j][s - 3] = a
    alg = AlgebraPresentation(
        field,
        structure,
        [one, zero, zero],
        associative=True,
        norm=form,
        trace=[field.from_rational(3), zero, zero],
    )
    cf = ConstructedForm(
        form=form,
        provenance={"kind": "tits-cubic", "a": _scalar_repr(a)},
        witness=ScaledWitness(scalar=rf(body), matrix=matrix),
        composition=alg.structure_matrices(),
        algebra=alg,
        unit=alg.unit,
    )
    return _check_witnesses(cf)


# ---------------------------------------------------------------------------
# split Albert norm


def _oct_norm_polys(oct_alg, x):
    """n(x) for a polynomial coordinate vector."""
    return oct_alg.norm.body.compose(list(x))


@functools.lru_cache(maxsize=None)
def split_albert_norm() -> ConstructedForm:
    """27-variable cubic norm of 3x3 Hermitian matrices over the split
    octonions: N = a1 a2 a3 - sum a_i n(x_i) + t((x1 x2) x3)."""
    oct_alg = split_octonion_algebra()
    field = oct_alg.field
    big = 27

    def oct_vec(offset):
        return [Polynomial.variable(field, big, offset + i) for i in range(8)]

    a = [Polynomial.variable(field, big, i) for i in range(3)]
    x1, x2, x3 = oct_vec(3), oct_vec(11), oct_vec(19)

    n1 = _oct_norm_polys(oct_alg, x1)
    n2 = _oct_norm_polys(oct_alg, x2)
    n3 = _oct_norm_polys(oct_alg, x3)
    x1x2 = oct_alg.product_polys(x1, x2)
    trilinear = oct_alg.product_polys(x1x2, x3)[0].scale(field.from_rational(2))
    body = a[0] * a[1] * a[2] - a[0] * n1 - a[1] * n2 - a[2] * n3 + trilinear
    form = HomogeneousForm(field, 3, big, body)
    unit = tuple(
        field.one if i in (0, 1, 2) else field.zero for i in range(big)
    )
    if form.eval(list(unit)) != field.one:
        raise RuntimeError("Albert norm does not take value 1 at the identity")
    cf = ConstructedForm(
        form=form,
        provenance={"kind": "albert"},
        unit=unit,
        extras={"octonions": oct_alg},
    )
    return cf


def albert_sharp(vec):
    """The quadratic adjoint X -> X# on coordinate vectors of polynomials:
    (a2 a3 - n(x1), a3 a1 - n(x2), a1 a2 - n(x3),
     conj(x3) conj(x2) - a1 x1, conj(x1) conj(x3) - a2 x2,
     conj(x2) conj(x1) - a3 x3).

    The conjugates multiply in reversed slot order; the other order breaks
    (X#)# = N(X) X over the (noncommutative) octonions."""
    oct_alg = split_octonion_algebra()
    field = oct_alg.field
    a = [vec[0], vec[1], vec[2]]
    xs = [list(vec[3:11]), list(vec[11:19]), list(vec[19:27])]
    conj = [oct_alg.involve_polys(x) for x in xs]
    norms = [_oct_norm_polys(oct_alg, x) for x in xs]
    out = [
        a[1] * a[2] - norms[0],
        a[2] * a[0] - norms[1],
        a[0] * a[1] - norms[2],
    ]
    pairs = [(1, 2), (2, 0), (0, 1)]
    for idx, (p, q) in enumerate(pairs):
        prod = oct_alg.product_polys(conj[q], conj[p])
        for coord in range(8):
            out.append(prod[coord] - a[idx] * xs[idx][coord])
    return out


# ---------------------------------------------------------------------------
# admissible triples and the structurable quartic


class AdmissibleTriple:
    """Cubic forms N on J and N' on J', paired by T, with the derived cross
    products and sharp maps.  T(l, j x i) = N(j, i, l) and
    T(j' x i', l') = N'(j', i', l'), where N(,,) is the full trilinear form."""

    def __init__(self, field, N: HomogeneousForm, Np: HomogeneousForm, gram, zeta=None):
        self.field = field
        self.N = N
        self.Np = Np
        self.dim_j = N.nvars
        self.dim_jp = Np.nvars
        self.gram = tuple(tuple(row) for row in gram)  # T(b_a, b'_c)
        if len(self.gram) != self.dim_j or any(
            len(row) != self.dim_jp for row in self.gram
        ):
            raise ValueError("pairing matrix shape mismatch")
        self.zeta = zeta
        self.cross_j = self._solve_cross(N, transpose=False)
        self.cross_jp = self._solve_cross(Np, transpose=True)
        self._adjoint_checked = False

    def _solve_cross(self, N, transpose: bool):
        """cross[a][b] = coordinates of b_a x b_b in the opposite space."""
        field = self.field
        theta = polarize(N)
        m = N.nvars
        six = field.from_rational(6)
        if transpose:
            rows = [
                [self.gram[c][l] for c in range(self.dim_j)]
                for l in range(self.dim_jp)
            ]
            # here N = N' lives on J', and the cross lands in J
            out_dim = self.dim_j
        else:
            rows = [list(self.gram[l]) for l in range(self.dim_j)]
            out_dim = self.dim_jp
        cross = []
        for a in range(m):
            row_out = []
            for b in range(m):
                rhs = [
                    six * theta.entry(tuple(sorted((a, b, l)))) for l in range(m)
                ]
                sol = linalg.solve(field, [list(r) for r in rows], rhs)
                if sol is None:
                    raise DegeneratePairing("pairing does not determine the cross product")
                if len(sol) != out_dim:
                    raise DegeneratePairing("pairing matrix is not square-solvable")
                row_out.append(tuple(sol))
            cross.append(tuple(row_out))
        return tuple(cross)

    def cross_apply(self, cross, u, v, out_dim: int):
        """The bilinear cross product on polynomial vectors."""
        field = self.field
        nv = u[0].nvars
        out = [Polynomial.zero(field, nv) for _ in range(out_dim)]
        m = len(u)
        for a in range(m):
            if u[a].is_zero():
                continue
            for b in range(m):
                if v[b].is_zero():
                    continue
                prod = u[a] * v[b]
                for c in range(out_dim):
                    coef = cross[a][b][c]
                    if not coef.is_zero():
                        out[c] = out[c] + prod.scale(coef)
        return out

    def sharp_j(self, vec):
        """j# = (1/2) j x j for a polynomial vector over J; lands in J'."""
        half = self.field.from_rational(Fraction(1, 2))
        out = self.cross_apply(self.cross_j, vec, vec, self.dim_jp)
        return [p.scale(half) for p in out]

    def sharp_jp(self, vec):
        half = self.field.from_rational(Fraction(1, 2))
        out = self.cross_apply(self.cross_jp, vec, vec, self.dim_j)
        return [p.scale(half) for p in out]

    def pair_polys(self, u, v):
        """T(u, v) for polynomial vectors u over J, v over J'."""
        field = self.field
        nv = u[0].nvars
        out = Polynomial.zero(field, nv)
        for a in range(self.dim_j):
            if u[a].is_zero():
                continue
            for c in range(self.dim_jp):
                g = self.gram[a][c]
                if g.is_zero() or v[c].is_zero():
                    continue
                out = out + (u[a] * v[c]).scale(g)
        return out

    def check_adjoint(self):
        """(j#)# = N(j) j and (j'#)# = N'(j') j', symbolically."""
        if self._adjoint_checked:
            return
        field = self.field
        for (m, sharp_in, sharp_out, norm) in (
            (self.dim_j, self.sharp_j, self.sharp_jp, self.N),
            (self.dim_jp, self.sharp_jp, self.sharp_j, self.Np),
        ):
            vec = [Polynomial.variable(field, m, i) for i in range(m)]
            double = sharp_out(sharp_in(vec))
            scale = norm.body
            for c in range(m):
                if double[c] != scale * vec[c]:
                    raise AdjointIdentityFailure(
                        "(j#)# = N(j) j fails in coordinate %d" % c
                    )
        self._adjoint_checked = True


def jordan_triple_from_degree3(J: AlgebraPresentation, zeta) -> AdmissibleTriple:
    """(zeta T_J, zeta N_J, zeta^2 N_J) on (J, J) for a degree-3 algebra with
    norm N_J and trace pairing T_J(x, y) = trace(x y)."""
    field = J.field
    zeta = zeta if isinstance(zeta, FieldElement) else field.from_rational(zeta)
    if zeta.is_zero():
        raise ValueError("zeta must be nonzero")
    if J.norm is None or J.norm.degree != 3 or J.trace is None:
        raise ValueError("presentation needs a cubic norm and a trace")
    m = J.dim
    gram = []
    for i in range(m):
        row = []
        for j in range(m):
            prod = J.product(J.basis_vector(i), J.basis_vector(j))
            row.append(zeta * J.trace_value(prod))
        gram.append(row)
    if linalg.rank(field, [list(r) for r in gram]) != m:
        raise DegeneratePairing("trace pairing is degenerate")
    N = HomogeneousForm(field, 3, m, J.norm.body.scale(zeta))
    Np = HomogeneousForm(field, 3, m, J.norm.body.scale(zeta * zeta))
    triple = AdmissibleTriple(field, N, Np, gram, zeta=zeta)
    triple.check_adjoint()
    return triple


def structurable_quartic(triple: AdmissibleTriple) -> ConstructedForm:
    """N_A(alpha, beta, j, j') = 4 alpha N(j) + 4 beta N'(j')
    - 4 T(j'#, j#) + (alpha beta - T(j, j'))^2."""
    triple.check_adjoint()
    field = triple.field
    mj, mjp = triple.dim_j, triple.dim_jp
    big = 2 + mj + mjp
    alpha = Polynomial.variable(field, big, 0)
    beta = Polynomial.variable(field, big, 1)
    j = [Polynomial.variable(field, big, 2 + i) for i in range(mj)]
    jp = [Polynomial.variable(field, big, 2 + mj + i) for i in range(mjp)]
    four = field.from_rational(4)
    n_j = triple.N.body.embed(big, 2)
    n_jp = triple.Np.body.embed(big, 2 + mj)
    pairing = triple.pair_polys(j, jp)
    sharp_pair = triple.pair_polys(triple.sharp_jp(jp), triple.sharp_j(j))
    body = (
        (alpha * n_j).scale(four)
        + (beta * n_jp).scale(four)
        - sharp_pair.scale(four)
        + (alpha * beta - pairing) ** 2
    )
    form = HomogeneousForm(field, 4, big, body)
    unit = tuple(
        field.one if i in (0, 1) else field.zero for i in range(big)
    )
    if form.eval(list(unit)) != field.one:
        raise RuntimeError("structurable quartic does not take value 1 at the unit")
    return ConstructedForm(
        form=form,
        provenance={
            "kind": "structurable",
            "dim": big,
            "zeta": None if triple.zeta is None else _scalar_repr(triple.zeta),
        },
        unit=unit,
        extras={"triple": triple},
    )


def _mtnn_product(triple: AdmissibleTriple, x, y):
    """Multiplication of M(T, N, N') on coordinate vectors (alpha, beta, j, j'):
    the (1,1) entry is alpha gamma + T(j, i'), the (1,2) block
    alpha i + delta j + j' x i', and symmetrically."""
    field = triple.field
    mj, mjp = triple.dim_j, triple.dim_jp
    ax, bx, jx, jpx = x[0], x[1], x[2 : 2 + mj], x[2 + mj :]
    ay, by, jy, jpy = y[0], y[1], y[2 : 2 + mj], y[2 + mj :]
    out_a = ax * ay + triple.pair_polys(jx, jpy)
    out_b = bx * by + triple.pair_polys(jy, jpx)
    cross_jp = triple.cross_apply(triple.cross_jp, jpx, jpy, mj)
    cross_j = triple.cross_apply(triple.cross_j, jx, jy, mjp)
    out_j = [
        ax * jy[c] + by * jx[c] + cross_jp[c] for c in range(mj)
    ]
    out_jp = [
        ay * jpx[c] + bx * jpy[c] + cross_j[c] for c in range(mjp)
    ]
    return [out_a, out_b] + out_j + out_jp


def _bar(x):
    return [x[1], x[0]] + list(x[2:])


def structurable_quartic_via_skew(triple: AdmissibleTriple) -> HomogeneousForm:
    """Independent route to N_A through the skew element s0 = diag(1, -1):
    N_A(x) = (1/12 mu) chi(s0 x, {x, s0 x, x}) with mu = s0^2 = 1 and
    chi read off from psi(u, v) = u bar(v) - v bar(u) being a multiple of s0."""
    field = triple.field
    mj, mjp = triple.dim_j, triple.dim_jp
    big = 2 + mj + mjp
    x = [Polynomial.variable(field, big, i) for i in range(big)]
    zero = Polynomial.zero(field, big)
    one = Polynomial.const(field, big, field.one)
    s0 = [one, -one] + [zero] * (mj + mjp)

    def mul(u, v):
        return _mtnn_product(triple, u, v)

    bar = _bar

    def psi_coefficient(u, v):
        """psi(u, v) = u bar(v) - v bar(u) must equal lambda s0; return lambda."""
        w = [p - q for p, q in zip(mul(u, bar(v)), mul(v, bar(u)))]
        if not (w[0] + w[1]).is_zero():
            raise RuntimeError("psi value is not skew in the diagonal entries")
        for entry in w[2:]:
            if not entry.is_zero():
                raise RuntimeError("psi value has off-diagonal components")
        return w[0]

    s0x = mul(s0, x)
    # {x, y, z} = (x bar y) z + (z bar y) x - (z bar x) y with y = s0 x, z = x
    y = s0x
    xby = mul(x, bar(y))
    xbx = mul(x, bar(x))
    braces = [
        p.scale(field.from_rational(2)) - q
        for p, q in zip(mul(xby, x), mul(xbx, y))
    ]
    # chi(u, v) = (2/mu) lambda where psi(s0 u, v) = lambda s0; here u = s0 x
    lam = psi_coefficient(mul(s0, s0x), braces)
    # N_A = (1/12 mu) chi = (1/6) lambda for mu = 1
    body = lam.scale(field.from_rational(Fraction(1, 6)))
    return HomogeneousForm(field, 4, big, body)


# ---------------------------------------------------------------------------
# Cayley-Dickson quartic (Example-4 doubling of a degree-4 Jordan algebra)


def split_jordan_q4() -> AlgebraPresentation:
    return split_etale_presentation(4)


def cd_theta_matrix(B: AlgebraPresentation):
    """theta(b) = -b + (1/2) t(b) 1 as a matrix; checked to have period 2."""
    field = B.field
    if B.trace is None:
        raise ValueError("presentation needs a trace")
    n = B.dim
    half = field.from_rational(Fraction(1, 2))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            val = half * B.unit[i] * B.trace[j]
            if i == j:
                val = val - field.one
            row.append(val)
        rows.append(tuple(row))
    sq = linalg.mat_mul(field, [list(r) for r in rows], [list(r) for r in rows])
    for i in range(n):
        for j in range(n):
            expect = field.one if i == j else field.zero
            if sq[i][j] != expect:
                raise ValueError("theta is not of period 2")
    return tuple(rows)


def cayley_dickson_quartic(B: AlgebraPresentation, mu) -> ConstructedForm:
    """N(b1, b2) = Q(b1) + mu^2 Q(b2) + (mu/2) t(U_b1 b2, b2)
    - (mu/4) t(b1, b2)^2, with U_b1 b2 = b1 b2 b1 and t(x, y) = trace(x y)."""
    field = B.field
    mu = mu if isinstance(mu, FieldElement) else field.from_rational(mu)
    if mu.is_zero():
        raise ValueError("mu must be nonzero")
    if B.norm is None or B.norm.degree != 4 or B.trace is None:
        raise ValueError("presentation needs a quartic norm and a trace")
    if not B.associative:
        raise ValueError("U-operator route needs an associative presentation")
    if B.norm.eval(list(B.unit)) != field.one:
        raise ValueError("Q(1) must be 1")
    n = B.dim
    big = 2 * n
    b1 = [Polynomial.variable(field, big, i) for i in range(n)]
    b2 = [Polynomial.variable(field, big, n + i) for i in range(n)]

    def trace_pair(x, y):
        prod = B.product_polys(x, y)
        out = Polynomial.zero(field, big)
        for t, p in zip(B.trace, prod):
            if not t.is_zero():
                out = out + p.scale(t)
        return out

    u_b1_b2 = B.product_polys(B.product_polys(b1, b2), b1)
    q1 = B.norm.body.embed(big, 0)
    q2 = B.norm.body.embed(big, n)
    body = (
        q1
        + q2.scale(mu * mu)
        + trace_pair(u_b1_b2, b2).scale(mu * field.from_rational(Fraction(1, 2)))
        - (trace_pair(b1, b2) ** 2).scale(mu * field.from_rational(Fraction(1, 4)))
    )
    form = HomogeneousForm(field, 4, big, body)
    unit = tuple(list(B.unit) + [field.zero] * n)
    if form.eval(list(unit)) != field.one:
        raise RuntimeError("Cayley-Dickson quartic does not take value 1 at (1, 0)")
    return ConstructedForm(
        form=form,
        provenance={"kind": "cayley-dickson", "mu": _scalar_repr(mu), "dim": big},
        unit=unit,
        extras={"theta": cd_theta_matrix(B), "base_algebra": B},
    )


# ---------------------------------------------------------------------------
# norm composition (transfer by the field norm)


def _a_mul(A: EtaleAlgebra, u, v):
    """Product of two A-valued polynomial vectors (coordinates over A.base)."""
    base = A.base
    m = A.degree
    nv = u[0].nvars
    conv = [Polynomial.zero(base, nv) for _ in range(2 * m - 1)]
    for i in range(m):
        if u[i].is_zero():
            continue
        for j in range(m):
            if v[j].is_zero():
                continue
            conv[i + j] = conv[i + j] + u[i] * v[j]
    for s in range(2 * m - 2, m - 1, -1):
        top = conv[s]
        if top.is_zero():
            continue
        conv[s] = Polynomial.zero(base, nv)
        for i in range(m):
            c = A.minpoly[i]
            if not c.is_zero():
                conv[s - m + i] = conv[s - m + i] - top.scale(c)
    return conv[:m]


def _phi0_coordinates(A: EtaleAlgebra, phi0: HomogeneousForm):
    """Coordinates over A.base of phi0(v), v_j = sum_i y_{j m + i} t^i,
    as polynomials in m*n variables."""
    base = A.base
    m = A.degree
    n = phi0.nvars
    big = m * n
    vs = []
    for j in range(n):
        vs.append(
            [Polynomial.variable(base, big, j * m + i) for i in range(m)]
        )
    coords = [Polynomial.zero(base, big) for _ in range(m)]
    for e, c in phi0.body.terms.items():
        acc = None
        for j, ej in enumerate(e):
            for _ in range(ej):
                acc = vs[j] if acc is None else _a_mul(A, acc, vs[j])
        if acc is None:
            acc = [Polynomial.const(base, big, base.one)] + [
                Polynomial.zero(base, big)
            ] * (m - 1)
        cvec = [Polynomial.const(base, big, cc) for cc in c.coeffs]
        acc = _a_mul(A, acc, cvec)
        for s in range(m):
            coords[s] = coords[s] + acc[s]
    return coords


def norm_via_regular(A: EtaleAlgebra, phi0: HomogeneousForm) -> Polynomial:
    """Transfer route 1: determinant of the multiplication-by-phi0(v) matrix."""
    base = A.base
    m = A.degree
    coords = _phi0_coordinates(A, phi0)
    nv = coords[0].nvars
    cols = [coords]
    for _ in range(m - 1):
        prev = cols[-1]
        # multiply by t: shift and reduce by the minimal polynomial
        shifted = [Polynomial.zero(base, nv)] + list(prev[:-1])
        top = prev[-1]
        if not top.is_zero():
            for i in range(m):
                c = A.minpoly[i]
                if not c.is_zero():
                    shifted[i] = shifted[i] - top.scale(c)
        cols.append(shifted)
    rows = [[cols[j][i] for j in range(m)] for i in range(m)]
    return ring_matrix_determinant(rows, Polynomial.zero(base, nv))


def norm_via_resultant(A: EtaleAlgebra, phi0: HomogeneousForm) -> Polynomial:
    """Transfer route 2: resultant of the minimal polynomial with the
    coordinate polynomial U(t) = sum_s P_s(y) t^s."""
    base = A.base
    m = A.degree
    coords = _phi0_coordinates(A, phi0)
    nv = coords[0].nvars
    zero = Polynomial.zero(base, nv)
    e = m - 1  # nominal degree of U
    size = m + e
    f_desc = [Polynomial.const(base, nv, A.minpoly[m - 1 - i]) for i in range(m)]
    f_desc = [Polynomial.const(base, nv, base.one)] + f_desc  # monic leading 1
    u_desc = [coords[e - i] for i in range(e + 1)]
    rows = []
    for r in range(e):
        row = [zero] * size
        for i, c in enumerate(f_desc):
            row[r + i] = c
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for i, c in enumerate(u_desc):
            row[r + i] = c
        rows.append(row)
    return ring_matrix_determinant(rows, zero)


def norm_compose(A, phi0: HomogeneousForm) -> ConstructedForm:
    """phi(v) = n_{A/base}(phi0(v)): degree [A:base] * deg(phi0) over the base
    field.  Both transfer routes are computed and must agree."""
    if isinstance(A, RationalField):
        return ConstructedForm(
            form=phi0, provenance={"kind": "norm-compose", "extension_degree": 1}
        )
    if phi0.field != A:
        raise ValueError("phi0 must be defined over A")
    reg = norm_via_regular(A, phi0)
    res = norm_via_resultant(A, phi0)
    if reg != res:
        raise RuntimeError("transfer routes disagree; conventions are inconsistent")
    base = A.base
    m = A.degree
    form = HomogeneousForm(base, m * phi0.degree, m * phi0.nvars, reg)
    return ConstructedForm(
        form=form,
        provenance={
            "kind": "norm-compose",
            "extension_degree": m,
            "minpoly": [str(_as_fraction_or_repr(c)) for c in A.minpoly],
            "base_degree": phi0.degree,
        },
    )


def _as_fraction_or_repr(c: FieldElement):
    try:
        return c.as_rational()
    except ValueError:
        return repr(c)


# ---------------------------------------------------------------------------
# catalog


def catalog():
    """Every built-in constructed form, with provenance."""
    entries = [
        ("hyperbolic-plane", lambda: hyperbolic_plane()),
        ("binary-gauss", lambda: composition_algebra_norm("binary", [-1])),
        ("quaternion-hamilton", lambda: composition_algebra_norm("quaternion", [-1, -1])),
        ("octonion-degen", lambda: composition_algebra_norm("octonion", [-1, -1, -1])),
        ("octonion-split", lambda: composition_algebra_norm("octonion", [1, 1, 1])),
        ("det-2", lambda: det_norm(2)),
        ("det-3", lambda: det_norm(3)),
        ("tits-cubic-1", lambda: tits_cubic(1)),
        ("tits-cubic-2", lambda: tits_cubic(2)),
        ("monomial-x2y2", lambda: monomial_form([2, 2])),
        ("product-hyperbolic-linear", lambda: _catalog_product()),
        ("power-hyperbolic-square", lambda: power_form(hyperbolic_plane(), 2)),
        ("block-sum-det3", lambda: scaled_block_sum(det_norm(3), [1, 2])),
        ("norm-compose-sqrt5", lambda: _catalog_norm_compose()),
        ("albert", lambda: split_albert_norm()),
        ("structurable-mat3", lambda: _catalog_structurable()),
        ("cayley-dickson-q4", lambda: cayley_dickson_quartic(split_jordan_q4(), 1)),
    ]
    return [(name, build()) for name, build in entries]


def _catalog_product():
    hyp = hyperbolic_plane()
    line = monomial_form([1])
    return product_form([(hyp, 1), (line, 1)])


def _catalog_norm_compose():
    A = field_extend(QQ, [-5, 0, 1])
    phi0 = HomogeneousForm(
        A,
        2,
        2,
        Polynomial.from_pairs(
            A, 2, [((2, 0), A.one), ((0, 2), A.from_rational(2))]
        ),
    )
    return norm_compose(A, phi0)


def _catalog_structurable():
    triple = jordan_triple_from_degree3(matrix_algebra(3), 1)
    return structurable_quartic(triple)

"""
Representation Modules - The modules L(d, eps) and L(d) as exact matrices
Builds the modules, checks relations and irreducibility, extracts highest-weight data,
constructs the gamma intertwiner and computes Hom-space dimensions.

Matrices act on coordinate columns: column i of a generator's matrix is the image of basis vector i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import (
    AlphabetMismatch,
    InvalidModule,
    KernelTooLarge,
    NotApplicable,
    NotDivisible,
    NotEigen,
)
from app.core.logging import get_logger
from app.services import linalg
from app.services.expression_parser import parse_laurent
from app.services.laurent import Q, LaurentPoly, QValue
from app.services.linalg import Matrix, Scalar, Vector
from app.services.ncpoly import A_LETTERS, U_LETTERS, Alphabet, Gen, NCPoly
from app.services.presentation import DEFINING_RELATIONS, SQUARE_DEFINITIONS
from app.services.uq_oracle import equitable_relations, expand

logger = get_logger(__name__)

NX, NY, NZ, X2, Y2, Z2 = A_LETTERS
QQ_SUM = Q + Q ** -1


@dataclass(frozen=True)
class ModuleRep:
    """Finite-dimensional module given by one square matrix per generator"""

    dim: int
    alphabet: Alphabet
    actions: Mapping[Gen, Matrix]
    q: Optional[QValue] = None
    basis_label: str = "u"

    def __post_init__(self):
        expected = set(U_LETTERS if self.alphabet == Alphabet.U else A_LETTERS)
        if set(self.actions) != expected:
            raise InvalidModule(
                f"a {self.alphabet.value}-module needs matrices for "
                f"{sorted(g.value for g in expected)}"
            )
        for gen, matrix in self.actions.items():
            if len(matrix) != self.dim or any(len(row) != self.dim for row in matrix):
                raise InvalidModule(f"matrix for {gen.value} is not {self.dim}x{self.dim}")

    @property
    def mode(self) -> str:
        return "symbolic" if self.q is None else "numeric"

    def matrix(self, gen: Gen) -> Matrix:
        if gen.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{gen.value} does not act on a {self.alphabet.value}-module")
        return self.actions[gen]

    def with_actions(self, actions: Mapping[Gen, Matrix]) -> "ModuleRep":
        return ModuleRep(self.dim, self.alphabet, dict(actions), self.q, self.basis_label)

    def to_json(self) -> Dict[str, object]:
        return {
            "dim": self.dim,
            "alphabet": self.alphabet.value,
            "q": None if self.q is None else str(self.q),
            "actions": {g.value: matrix_to_json(m) for g, m in self.actions.items()},
        }


def matrix_to_json(matrix: Matrix) -> List[List[str]]:
    return [[str(x) for x in row] for row in matrix]


def _matrix(n: int, entries: Mapping[Tuple[int, int], LaurentPoly], q: Optional[QValue]) -> Matrix:
    return tuple(
        tuple(linalg.coerce(entries.get((i, j), LaurentPoly.zero()), q) for j in range(n))
        for i in range(n)
    )


def _diag(values: Sequence[Scalar]) -> Matrix:
    n = len(values)
    zero = values[0] * 0 if values else 0
    return tuple(tuple(values[i] if i == j else zero for j in range(n)) for i in range(n))


# Construction


def build_L_eps(d: int, eps: int, q: Optional[QValue] = None) -> ModuleRep:
    """The (d+1)-dimensional module of type eps over x, y, z"""
    if d < 0:
        raise InvalidModule("d must be non-negative")
    if eps not in (1, -1):
        raise InvalidModule("eps must be 1 or -1")
    n = d + 1
    x: Dict[Tuple[int, int], LaurentPoly] = {}
    y: Dict[Tuple[int, int], LaurentPoly] = {}
    z: Dict[Tuple[int, int], LaurentPoly] = {}
    for i in range(n):
        x[(i, i)] = eps * Q ** (d - 2 * i)
        y[(i, i)] = eps * Q ** (d - 2 * i)
        z[(i, i)] = eps * Q ** (2 * i - d)
        if i >= 1:
            x[(i - 1, i)] = eps * (Q ** -d - Q ** (d - 2 * i + 2))
        if i < d:
            y[(i + 1, i)] = eps * (Q ** d - Q ** (d - 2 * i - 2))
    return ModuleRep(n, Alphabet.U, {Gen.X: _matrix(n, x, q), Gen.Y: _matrix(n, y, q),
                                     Gen.Z: _matrix(n, z, q)}, q)


def nu_z_coefficients(d: int, i: int) -> Dict[int, LaurentPoly]:
    """Coefficients of u_{i-1}, u_i, u_{i+1} in nu_z u_i"""
    return {
        -1: Q ** (2 * d - 4 * i + 3) * (1 - Q ** (2 * (i - d - 1))),
        0: Q ** (2 * d - 2 * i + 1) + Q ** (-2 * i - 1) - Q ** (2 * d - 4 * i + 1) - Q ** (2 * d - 4 * i - 1),
        1: Q ** (2 * d - 4 * i - 3) * (1 - Q ** (2 * (i + 1))),
    }


def build_L(d: int, q: Optional[QValue] = None) -> ModuleRep:
    """The (d+1)-dimensional module over nx, ny, nz, x2, y2, z2"""
    if d < 0:
        raise InvalidModule("d must be non-negative")
    n = d + 1
    nx: Dict[Tuple[int, int], LaurentPoly] = {}
    ny: Dict[Tuple[int, int], LaurentPoly] = {}
    nz: Dict[Tuple[int, int], LaurentPoly] = {}
    z2: Dict[Tuple[int, int], LaurentPoly] = {}
    for i in range(n):
        if i < d:
            nx[(i + 1, i)] = Q ** -1 * (1 - Q ** (2 * (i + 1)))
        if i >= 1:
            ny[(i - 1, i)] = Q * (1 - Q ** (2 * (i - d - 1)))
        for offset, coefficient in nu_z_coefficients(d, i).items():
            if 0 <= i + offset <= d:
                nz[(i + offset, i)] = coefficient
        z2[(i, i)] = Q ** (4 * i - 2 * d)

    # squares of x and y come from the type-1 module; the type cancels in a square
    equitable = build_L_eps(d, 1, q)
    x, y = equitable.matrix(Gen.X), equitable.matrix(Gen.Y)
    actions = {
        NX: _matrix(n, nx, q),
        NY: _matrix(n, ny, q),
        NZ: _matrix(n, nz, q),
        X2: linalg.matmul(x, x),
        Y2: linalg.matmul(y, y),
        Z2: _matrix(n, z2, q),
    }
    return ModuleRep(n, Alphabet.A, actions, q)


def x2_table(d: int, literal: bool = False, q: Optional[QValue] = None) -> Matrix:
    """Tabulated x^2 action on the u-basis; literal=True reads the middle coefficient's base as the number d"""
    n = d + 1
    entries: Dict[Tuple[int, int], LaurentPoly] = {}
    for i in range(n):
        entries[(i, i)] = Q ** (2 * d - 4 * i)
        if i >= 1:
            exponent = d - 2 * i + 2
            base = LaurentPoly.constant(Fraction(d) ** exponent) if literal else Q ** exponent
            entries[(i - 1, i)] = Q ** (d - 2 * i + 1) * QQ_SUM * (Q ** -d - base)
        if i >= 2:
            entries[(i - 2, i)] = (Q ** -d - Q ** (d - 2 * i + 2)) * (Q ** -d - Q ** (d - 2 * i + 4))
    return _matrix(n, entries, q)


def y2_table(d: int, q: Optional[QValue] = None) -> Matrix:
    n = d + 1
    entries: Dict[Tuple[int, int], LaurentPoly] = {}
    for i in range(n):
        entries[(i, i)] = Q ** (2 * d - 4 * i)
        if i + 1 <= d:
            entries[(i + 1, i)] = Q ** (d - 2 * i - 1) * QQ_SUM * (Q ** d - Q ** (d - 2 * i - 2))
        if i + 2 <= d:
            entries[(i + 2, i)] = (Q ** d - Q ** (d - 2 * i - 2)) * (Q ** d - Q ** (d - 2 * i - 4))
    return _matrix(n, entries, q)


# Evaluation of polynomials on modules


def act(p: NCPoly, m: ModuleRep) -> Matrix:
    """Matrix of p on m; a word g1...gn acts as A(g1)...A(gn)"""
    if p.alphabet != m.alphabet:
        raise AlphabetMismatch(
            f"cannot act with a {p.alphabet.value}-polynomial on a {m.alphabet.value}-module"
        )
    total = linalg.zeros(m.dim, m.dim, m.q)
    products: Dict[Tuple[Gen, ...], Matrix] = {(): linalg.identity(m.dim, m.q)}
    for word, coefficient in p.terms():
        letters = word.letters
        if letters not in products:
            product = products[()]
            for k in range(1, len(letters) + 1):
                prefix = letters[:k]
                if prefix not in products:
                    products[prefix] = linalg.matmul(product, m.actions[letters[k - 1]])
                product = products[prefix]
        total = linalg.matadd(total, linalg.scale(linalg.coerce(coefficient, m.q), products[letters]))
    return total


@dataclass
class RelationResult:
    name: str
    passed: bool


@dataclass
class ModuleRelationReport:
    alphabet: Alphabet
    results: List[RelationResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]


def module_relations(alphabet: Alphabet) -> List[Tuple[str, NCPoly]]:
    if alphabet == Alphabet.U:
        return equitable_relations()
    return DEFINING_RELATIONS + SQUARE_DEFINITIONS


def check_module_relations(m: ModuleRep) -> ModuleRelationReport:
    report = ModuleRelationReport(m.alphabet)
    for name, relation in module_relations(m.alphabet):
        report.results.append(RelationResult(name, linalg.is_zero_matrix(act(relation, m))))
    if not report.ok:
        logger.debug("module relations failed", failed=report.failed, dim=m.dim)
    return report


# Module operations


def restrict(m: ModuleRep) -> ModuleRep:
    """Restriction of an x, y, z module to the nu/square generators"""
    if m.alphabet != Alphabet.U:
        raise AlphabetMismatch("only modules over x, y, z can be restricted")
    return ModuleRep(m.dim, Alphabet.A, {g: act(expand(g), m) for g in A_LETTERS}, m.q)


def direct_sum(a: ModuleRep, b: ModuleRep) -> ModuleRep:
    if a.alphabet != b.alphabet or a.q != b.q:
        raise InvalidModule("direct sums need modules over the same alphabet and mode")
    n = a.dim + b.dim
    zero = linalg.zero(a.q)

    def block(ma: Matrix, mb: Matrix) -> Matrix:
        rows = [tuple(row) + (zero,) * b.dim for row in ma]
        rows += [(zero,) * a.dim + tuple(row) for row in mb]
        return tuple(rows)

    return ModuleRep(n, a.alphabet, {g: block(a.actions[g], b.actions[g]) for g in a.actions}, a.q)


def conjugate(m: ModuleRep, p: Matrix) -> ModuleRep:
    """Change of basis: each action A becomes P^-1 A P"""
    p = tuple(tuple(linalg.coerce(x, m.q) for x in row) for row in p)
    p_inv = linalg.inverse(p, m.q)
    return m.with_actions({g: linalg.matmul(p_inv, linalg.matmul(a, p)) for g, a in m.actions.items()})


def evaluate(m: ModuleRep, q: QValue) -> ModuleRep:
    if m.q is not None:
        if m.q == q:
            return m
        raise InvalidModule(f"module is already evaluated at q = {m.q}")
    return ModuleRep(m.dim, m.alphabet, {g: linalg.evaluate(a, q) for g, a in m.actions.items()},
                     q, m.basis_label)


def perturb(m: ModuleRep, gen: Gen, row: int, col: int, delta: Scalar = 1) -> ModuleRep:
    actions = dict(m.actions)
    rows = [list(r) for r in actions[gen]]
    rows[row][col] = rows[row][col] + linalg.coerce(delta, m.q)
    actions[gen] = tuple(tuple(r) for r in rows)
    return m.with_actions(actions)


def random_unimodular(n: int, rng: random.Random, spread: int = 3) -> Matrix:
    """Random integer matrix of determinant 1 (unit lower times unit upper triangular)"""
    lower = [[Fraction(1) if i == j else Fraction(rng.randint(-spread, spread)) if j < i else Fraction(0)
              for j in range(n)] for i in range(n)]
    upper = [[Fraction(1) if i == j else Fraction(rng.randint(-spread, spread)) if j > i else Fraction(0)
              for j in range(n)] for i in range(n)]
    return linalg.matmul(tuple(map(tuple, lower)), tuple(map(tuple, upper)))


def nilpotency_index(a: Matrix, q: Optional[QValue] = None) -> Optional[int]:
    """Smallest k with a^k = 0, or None when a is not nilpotent"""
    n = len(a)
    power = linalg.identity(n, q)
    for k in range(n + 1):
        if linalg.is_zero_matrix(power):
            return k
        power = linalg.matmul(power, a)
    return None


# Irreducibility


def _spans_under(start: Vector, operators: Sequence[Matrix], n: int, q: Optional[QValue]) -> bool:
    basis: List[Vector] = [start]
    frontier = [start]
    while frontier and len(basis) < n:
        following = []
        for vector in frontier:
            for op in operators:
                candidate = linalg.matvec(op, vector)
                if any(candidate) and linalg.rank(basis + [candidate], q) > len(basis):
                    basis.append(candidate)
                    following.append(candidate)
        frontier = following
    return len(basis) == n


def _z2_eigenvectors(m: ModuleRep) -> Optional[List[Vector]]:
    """Eigenvectors for d+1 distinct z2-eigenvalues, or None if there are fewer"""
    n = m.dim
    z2 = m.matrix(Z2)
    if linalg.is_diagonal(z2):
        values = [z2[i][i] for i in range(n)]
        if len(set(values)) < n:
            return None
        return list(linalg.identity(n, m.q))
    if m.q is None:
        raise NotApplicable("z2 is not diagonal in the given basis; evaluate at a numeric q first")
    d = n - 1
    vectors = []
    for i in range(n):
        eigenvalue = (Q ** (4 * i - 2 * d)).evaluate(m.q)
        shifted = linalg.matsub(z2, linalg.scale(eigenvalue, linalg.identity(n, m.q)))
        kernel = linalg.nullspace(shifted, n, m.q)
        if len(kernel) != 1:
            return None
        vectors.append(kernel[0])
    return vectors


def check_irreducible(m: ModuleRep) -> bool:
    if m.alphabet != Alphabet.A:
        raise AlphabetMismatch("irreducibility is checked over the nu/square generators")
    eigenvectors = _z2_eigenvectors(m)
    if eigenvectors is None:
        return False
    ladders = (m.matrix(NX), m.matrix(NY))
    return all(_spans_under(v, ladders, m.dim, m.q) for v in eigenvectors)


def check_commuting_on_kernel(m: ModuleRep) -> bool:
    """z2 and ny*nx commute and both preserve ker(ny)"""
    z2, ny, nx = m.matrix(Z2), m.matrix(NY), m.matrix(NX)
    nynx = linalg.matmul(ny, nx)
    if not linalg.matrices_equal(linalg.matmul(z2, nynx), linalg.matmul(nynx, z2)):
        return False
    for k in linalg.nullspace(ny, m.dim, m.q):
        for op in (z2, nynx):
            if any(linalg.matvec(ny, linalg.matvec(op, k))):
                return False
    return True


# Highest-weight data


@dataclass
class HWData:
    d: int
    lam: Scalar
    alpha: Tuple[Scalar, ...]
    basis_matrix: Optional[Matrix] = None
    q: Optional[QValue] = None

    def to_json(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "lambda": str(self.lam),
            "alpha": [str(a) for a in self.alpha],
            "basis_matrix": None if self.basis_matrix is None else matrix_to_json(self.basis_matrix),
            "q": None if self.q is None else str(self.q),
        }


def expected_lambda(d: int) -> LaurentPoly:
    return Q ** (-2 * d)


def expected_alpha(d: int, i: int) -> LaurentPoly:
    """(q^2i - 1)(q^2(i-d-1) - 1)"""
    return (Q ** (2 * i) - 1) * (Q ** (2 * (i - d - 1)) - 1)


def alpha_closed_form(lam: LaurentPoly, i: int) -> LaurentPoly:
    return 1 - Q ** (2 * i) + lam * (Q ** (4 * i - 2) - Q ** (2 * i - 2))


def solve_alpha(d: int) -> HWData:
    """lambda and alpha_0..alpha_{d+1} from the recurrence, with every identity re-checked"""
    if d < 0:
        raise InvalidModule("d must be non-negative")
    lam = expected_lambda(d)
    alpha = tuple(alpha_closed_form(lam, i) for i in range(d + 2))
    if alpha[0] or alpha[d + 1]:
        raise InvalidModule(f"boundary conditions fail for d = {d}")
    for i in range(d + 1):
        if alpha[i + 1] != Q ** 2 * alpha[i] + (Q ** 2 - 1) * (Q ** (4 * i) * lam - 1):
            raise InvalidModule(f"recurrence fails at i = {i} for d = {d}")
        if alpha[i] != expected_alpha(d, i):
            raise InvalidModule(f"factored form fails at i = {i} for d = {d}")
    return HWData(d, lam, alpha)


def _divide(a: Scalar, b: Scalar, q: Optional[QValue]) -> Scalar:
    if q is None:
        return LaurentPoly.coerce(a).div_exact(b)
    return Fraction(a) / Fraction(b)


def _proportionality(image: Vector, base: Vector, q: Optional[QValue]) -> Scalar:
    """c with image = c * base, or NotEigen"""
    k = next(i for i, x in enumerate(base) if x)
    try:
        c = _divide(image[k], base[k], q)
    except NotDivisible as e:
        raise NotEigen("vector images are not proportional") from e
    if any(x - c * y for x, y in zip(image, base)):
        raise NotEigen("vector images are not proportional")
    return c


def extract_highest_weight(m: ModuleRep) -> HWData:
    """v_0 spans ker(ny), v_i = nx^i v_0; reads off d, lambda and alpha"""
    if m.alphabet != Alphabet.A:
        raise AlphabetMismatch("highest-weight extraction needs a nu/square module")
    q, n = m.q, m.dim
    nx, ny, z2 = m.matrix(NX), m.matrix(NY), m.matrix(Z2)

    kernel = linalg.nullspace(ny, n, q)
    if len(kernel) > 1:
        raise KernelTooLarge(f"ker(ny) has dimension {len(kernel)}", dim=n)
    if not kernel:
        raise InvalidModule("ny has trivial kernel, so it is not nilpotent")

    v0 = kernel[0]
    lam = _proportionality(linalg.matvec(z2, v0), v0, q)

    vectors = [v0]
    while True:
        following = linalg.matvec(nx, vectors[-1])
        if not any(following):
            break
        vectors.append(following)
        if len(vectors) > n:
            raise InvalidModule("nx is not nilpotent")
    d = len(vectors) - 1
    if d + 1 != n or linalg.rank(vectors, q) != n:
        raise InvalidModule(f"the ladder from ker(ny) spans {len(vectors)} of {n} dimensions")

    alpha = [linalg.zero(q)]
    for i in range(1, d + 1):
        alpha.append(_proportionality(linalg.matvec(ny, vectors[i]), vectors[i - 1], q))
    alpha.append(linalg.zero(q))

    if lam != linalg.coerce(expected_lambda(d), q):
        raise InvalidModule(f"lambda = {lam} differs from q^{-2 * d}")
    for i in range(d + 1):
        if alpha[i] != linalg.coerce(expected_alpha(d, i), q):
            raise InvalidModule(f"alpha_{i} = {alpha[i]} violates the closed form")

    logger.debug("highest weight extracted", d=d, mode=m.mode)
    return HWData(d, lam, tuple(alpha), linalg.from_columns(vectors), q)


# v-basis and the gamma intertwiner


def _v_basis_core(d: int, q: Optional[QValue]) -> Dict[Gen, Matrix]:
    n = d + 1
    nx = {(i + 1, i): LaurentPoly.one() for i in range(d)}
    ny = {(i - 1, i): expected_alpha(d, i) for i in range(1, n)}
    z2 = {(i, i): Q ** (4 * i - 2 * d) for i in range(n)}
    return {NX: _matrix(n, nx, q), NY: _matrix(n, ny, q), Z2: _matrix(n, z2, q)}


def build_v_basis_action(d: int, q: Optional[QValue] = None) -> ModuleRep:
    """Action on v_0..v_d written out entrywise"""
    n = d + 1
    actions = _v_basis_core(d, q)
    x2: Dict[Tuple[int, int], LaurentPoly] = {}
    y2: Dict[Tuple[int, int], LaurentPoly] = {}
    nz: Dict[Tuple[int, int], LaurentPoly] = {}
    for i in range(n):
        scale = Q ** (2 * d - 4 * i)
        x2[(i, i)] = scale
        y2[(i, i)] = scale
        nz[(i, i)] = (Q ** (2 * d - 2 * i + 1) + Q ** (-2 * i - 1)
                      - Q ** (2 * d - 4 * i + 1) - Q ** (2 * d - 4 * i - 1))
        if i >= 1:
            x2[(i - 1, i)] = -scale * Q ** 2 * QQ_SUM * expected_alpha(d, i)
            nz[(i - 1, i)] = (Q ** (-2 * i) - 1) * (Q ** (-2 * (i - d - 1)) - 1)
        if i >= 2:
            x2[(i - 2, i)] = scale * Q ** 4 * expected_alpha(d, i) * expected_alpha(d, i - 1)
        if i + 1 <= d:
            y2[(i + 1, i)] = -Q ** (2 * d - 4 * i - 2) * QQ_SUM
            nz[(i + 1, i)] = Q ** (2 * d - 4 * i - 2)
        if i + 2 <= d:
            y2[(i + 2, i)] = Q ** (2 * d - 4 * i - 4)
    actions.update({X2: _matrix(n, x2, q), Y2: _matrix(n, y2, q), NZ: _matrix(n, nz, q)})
    return ModuleRep(n, Alphabet.A, actions, q, basis_label="v")


def v_basis_from_identities(d: int, q: Optional[QValue] = None) -> ModuleRep:
    """Same action derived from nx, ny, z2 through the square/nu identities"""
    n = d + 1
    actions = _v_basis_core(d, q)
    nx, ny, z2 = actions[NX], actions[NY], actions[Z2]
    one = linalg.identity(n, q)

    def c(value: LaurentPoly) -> Scalar:
        return linalg.coerce(value, q)

    def combine(*terms: Tuple[LaurentPoly, Matrix]) -> Matrix:
        total = linalg.zeros(n, n, q)
        for coefficient, matrix in terms:
            total = linalg.matadd(total, linalg.scale(c(coefficient), matrix))
        return total

    # phi v_i = q^{2d-4i} (phi z2) v_i
    rescale = _diag([c(Q ** (2 * d - 4 * i)) for i in range(n)])
    x2z2 = combine((LaurentPoly.one(), one), (-Q ** 2 * QQ_SUM, ny), (Q ** 4, linalg.matmul(ny, ny)))
    y2z2 = combine((LaurentPoly.one(), one), (-Q ** -2 * QQ_SUM, nx), (Q ** -4, linalg.matmul(nx, nx)))
    nzz2 = combine((Q ** -1, z2), (-Q ** -1, one), (Q ** -2, nx), (Q ** 2, ny), (-Q, linalg.matmul(nx, ny)))
    actions.update({
        X2: linalg.matmul(x2z2, rescale),
        Y2: linalg.matmul(y2z2, rescale),
        NZ: linalg.matmul(nzz2, rescale),
    })
    return ModuleRep(n, Alphabet.A, actions, q, basis_label="v")


@dataclass
class GammaIsomorphism:
    d: int
    gammas: Tuple[LaurentPoly, ...]
    verified: bool


def gamma_values(d: int) -> Tuple[LaurentPoly, ...]:
    gammas = [LaurentPoly.one()]
    for i in range(d):
        gammas.append(gammas[-1] * Q ** -1 * (1 - Q ** (2 * (i + 1))))
    return tuple(gammas)


def gamma_iso(d: int) -> GammaIsomorphism:
    """v_i -> gamma_i u_i intertwines the v-basis action with build_L(d)"""
    gammas = gamma_values(d)
    gamma = _diag(list(gammas))
    abstract, target = build_v_basis_action(d), build_L(d)
    verified = all(gammas) and all(
        linalg.matrices_equal(linalg.matmul(gamma, abstract.actions[g]),
                              linalg.matmul(target.actions[g], gamma))
        for g in A_LETTERS
    )
    if not verified:
        logger.warning("gamma map failed to intertwine", d=d)
    return GammaIsomorphism(d, gammas, verified)


@dataclass
class Classification:
    hw: HWData
    intertwiner: Matrix  # columns: images of u_0..u_d in the input basis
    verified: bool


def classify(m: ModuleRep) -> Classification:
    """Extraction followed by an explicit isomorphism from build_L(d) onto the input"""
    if m.alphabet == Alphabet.U:
        m = restrict(m)
    hw = extract_highest_weight(m)
    gammas = [linalg.coerce(g, m.q) for g in gamma_values(hw.d)]
    if m.q is None:
        # scale by the product of the gammas so entries stay Laurent
        total = LaurentPoly.one()
        for g in gammas:
            total = total * g
        weights = [total.div_exact(g) for g in gammas]
    else:
        weights = [1 / g for g in gammas]
    intertwiner = linalg.matmul(hw.basis_matrix, _diag(weights))
    target = build_L(hw.d, m.q)
    verified = linalg.rank(intertwiner, m.q) == m.dim and all(
        linalg.matrices_equal(linalg.matmul(m.actions[g], intertwiner),
                              linalg.matmul(intertwiner, target.actions[g]))
        for g in A_LETTERS
    )
    return Classification(hw, intertwiner, verified)


# Hom spaces


def _align(a: ModuleRep, b: ModuleRep) -> Tuple[ModuleRep, ModuleRep]:
    if a.q == b.q:
        return a, b
    if a.q is None:
        return evaluate(a, b.q), b
    if b.q is None:
        return a, evaluate(b, a.q)
    raise InvalidModule("modules are evaluated at different values of q")


def hom_space(a: ModuleRep, b: ModuleRep, alphabet: Optional[Alphabet] = None) -> int:
    """dim of {T : T A(g) = B(g) T for every generator g}"""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch("Hom spaces need modules over the same alphabet")
    if alphabet is not None and Alphabet(alphabet) != a.alphabet:
        raise AlphabetMismatch(f"modules are over the {a.alphabet.value}-alphabet")
    a, b = _align(a, b)
    q, na, nb = a.q, a.dim, b.dim
    zero = linalg.zero(q)

    def unknown(i: int, j: int) -> int:
        return i * na + j

    rows: List[Tuple[Scalar, ...]] = []
    for g in a.actions:
        ma, mb = a.actions[g], b.actions[g]
        for i in range(nb):
            for j in range(na):
                row = [zero] * (na * nb)
                for k in range(na):
                    if ma[k][j]:
                        row[unknown(i, k)] = row[unknown(i, k)] + ma[k][j]
                for k in range(nb):
                    if mb[i][k]:
                        row[unknown(k, j)] = row[unknown(k, j)] - mb[i][k]
                if any(row):
                    rows.append(tuple(row))
    return na * nb - linalg.rank(rows, q)


# JSON input


def module_from_payload(dim: int, actions: Mapping[str, Sequence[Sequence[object]]],
                        q: Optional[QValue] = None) -> ModuleRep:
    """Module from {generator name: rows of entry text}; entries may mention q"""
    try:
        gens = {Gen.from_name(name): rows for name, rows in actions.items()}
    except ValueError as e:
        raise InvalidModule(f"unknown generator in {sorted(actions)}") from e
    alphabets = {g.alphabet for g in gens}
    if len(alphabets) != 1:
        raise AlphabetMismatch("module matrices mix the two alphabets")
    parsed = {
        g: tuple(tuple(linalg.coerce(parse_laurent(entry), q) for entry in row) for row in rows)
        for g, rows in gens.items()
    }
    return ModuleRep(dim, alphabets.pop(), parsed, q)



from fractions import Fraction

import pytest

from app.core.exceptions import AlphabetMismatch, InvalidModule, KernelTooLarge, NotApplicable
from app.services import linalg, modules
from app.services.laurent import Q, LaurentPoly
from app.services.ncpoly import A_LETTERS, Alphabet, Gen

NX, NY, NZ, X2, Y2, Z2 = A_LETTERS


@pytest.mark.parametrize("d", [0, 1, 2, 3])
@pytest.mark.parametrize("eps", [1, -1])
def test_l_eps_satisfies_equitable_relations(d, eps):
    assert modules.check_module_relations(modules.build_L_eps(d, eps)).ok


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_l_satisfies_defining_relations(d):
    report = modules.check_module_relations(modules.build_L(d))
    assert report.ok, report.failed


def test_l_numeric_mode(q2):
    m = modules.build_L(4, q2)
    assert m.mode == "numeric"
    assert modules.check_module_relations(m).ok


def test_l1_entries():
    m = modules.build_L(1)
    assert m.matrix(NX)[1][0] == Q ** -1 - Q
    assert m.matrix(NY)[0][1] == Q - Q ** -1
    assert m.matrix(Z2) == ((Q ** -2, LaurentPoly.zero()), (LaurentPoly.zero(), Q ** 2))


def test_perturbed_module_breaks_a_relation():
    broken = modules.perturb(modules.build_L(2), NX, 0, 0)
    report = modules.check_module_relations(broken)
    assert not report.ok
    assert report.failed


@pytest.mark.parametrize("eps", [1, -1])
def test_restriction_is_independent_of_type(eps):
    restricted = modules.restrict(modules.build_L_eps(3, eps))
    target = modules.build_L(3)
    for g in A_LETTERS:
        assert linalg.matrices_equal(restricted.matrix(g), target.matrix(g)), g


def test_square_tables():
    for d in range(5):
        m = modules.build_L_eps(d, 1)
        x, y = m.matrix(Gen.X), m.matrix(Gen.Y)
        assert linalg.matrices_equal(modules.x2_table(d), linalg.matmul(x, x))
        assert linalg.matrices_equal(modules.y2_table(d), linalg.matmul(y, y))


def test_literal_x2_table_is_wrong():
    x = modules.build_L_eps(2, 1).matrix(Gen.X)
    assert not linalg.matrices_equal(modules.x2_table(2, literal=True), linalg.matmul(x, x))


def test_irreducibility():
    assert modules.check_irreducible(modules.build_L(3))
    split = modules.direct_sum(modules.build_L(0), modules.build_L(1))
    assert split.dim == 3
    assert not modules.check_irreducible(split)


def test_irreducibility_after_change_of_basis(q32, rng):
    p = modules.random_unimodular(3, rng)
    m = modules.conjugate(modules.build_L(2, q32), p)
    assert modules.check_irreducible(m)


def test_symbolic_irreducibility_needs_diagonal_z2():
    p = ((1, 1), (0, 1))
    m = modules.conjugate(modules.build_L(1), p)
    with pytest.raises(NotApplicable):
        modules.check_irreducible(m)


def test_nilpotency():
    m = modules.build_L(3)
    assert modules.nilpotency_index(m.matrix(NX)) == 4
    assert modules.nilpotency_index(m.matrix(NY)) == 4
    assert modules.nilpotency_index(m.matrix(Z2)) is None


def test_commuting_on_kernel():
    assert modules.check_commuting_on_kernel(modules.build_L(3))


def test_solve_alpha():
    hw = modules.solve_alpha(3)
    assert hw.lam == Q ** -6
    assert hw.alpha[0] == 0 and hw.alpha[4] == 0
    assert hw.alpha[1] == (Q ** 2 - 1) * (Q ** -6 - 1)


def test_extract_highest_weight():
    hw = modules.extract_highest_weight(modules.build_L(2))
    assert hw.d == 2
    assert hw.lam == Q ** -4
    assert hw.alpha == modules.solve_alpha(2).alpha
    assert hw.to_json()["lambda"] == "q^-4"


def test_extract_after_change_of_basis(q32, rng):
    p = modules.random_unimodular(4, rng)
    m = modules.conjugate(modules.build_L(3, q32), p)
    hw = modules.extract_highest_weight(m)
    assert hw.d == 3
    assert hw.lam == Fraction(2, 3) ** 6
    assert hw.alpha == tuple(a.evaluate(q32) for a in modules.solve_alpha(3).alpha)


def test_extract_rejects_reducible_input():
    with pytest.raises(KernelTooLarge):
        modules.extract_highest_weight(modules.direct_sum(modules.build_L(0), modules.build_L(0)))


def test_v_basis_tables_match_identities():
    for d in range(5):
        tables = modules.build_v_basis_action(d)
        derived = modules.v_basis_from_identities(d)
        for g in A_LETTERS:
            assert linalg.matrices_equal(tables.matrix(g), derived.matrix(g)), (d, g)


def test_gamma():
    gammas = modules.gamma_values(2)
    assert gammas[0] == 1
    assert gammas[2] == Q ** -2 * (1 - Q ** 2) * (1 - Q ** 4)
    assert modules.gamma_iso(4).verified


def test_classify_equitable_module():
    result = modules.classify(modules.build_L_eps(2, -1))
    assert result.verified
    assert result.hw.d == 2


def test_classify_conjugated_numeric(q2, rng):
    m = modules.conjugate(modules.build_L(3, q2), modules.random_unimodular(4, rng))
    assert modules.classify(m).verified


@pytest.mark.parametrize("d", [1, 2])
def test_hom_dimensions(d, q2):
    plus, minus = modules.build_L_eps(d, 1, q2), modules.build_L_eps(d, -1, q2)
    dims = (
        modules.hom_space(modules.restrict(plus), modules.restrict(minus)),
        modules.hom_space(plus, minus),
        modules.hom_space(plus, plus),
    )
    assert dims == (1, 0, 1)


def test_hom_between_different_dimensions(q2):
    assert modules.hom_space(modules.build_L(1, q2), modules.build_L(2, q2)) == 0


def test_hom_needs_one_alphabet(q2):
    with pytest.raises(AlphabetMismatch):
        modules.hom_space(modules.build_L(1, q2), modules.build_L_eps(1, 1, q2))


def test_module_from_payload_round_trip(q2):
    m = modules.build_L(2, q2)
    payload = m.to_json()
    rebuilt = modules.module_from_payload(payload["dim"], payload["actions"], q2)
    assert rebuilt.alphabet == Alphabet.A
    for g in A_LETTERS:
        assert rebuilt.matrix(g) == m.matrix(g)


def test_module_from_symbolic_payload():
    m = modules.module_from_payload(1, {"x": [["q^0"]], "y": [["1"]], "z": [["1"]]})
    assert m.alphabet == Alphabet.U
    assert modules.check_module_relations(m).ok


def test_invalid_payloads():
    with pytest.raises(InvalidModule):
        modules.module_from_payload(1, {"w": [["1"]]})
    with pytest.raises(AlphabetMismatch):
        modules.module_from_payload(1, {"x": [["1"]], "nx": [["0"]]})
    with pytest.raises(InvalidModule):
        modules.module_from_payload(1, {"x": [["1"]], "y": [["1"]]})
    with pytest.raises(InvalidModule):
        modules.module_from_payload(2, {"x": [["1"]], "y": [["1"]], "z": [["1"]]})


def test_invalid_parameters():
    with pytest.raises(InvalidModule):
        modules.build_L_eps(2, 0)
    with pytest.raises(InvalidModule):
        modules.build_L(-1)


def test_hom_symbolic_and_mixed(q2, q32):
    assert modules.hom_space(modules.build_L(1), modules.build_L(1)) == 1
    assert modules.hom_space(modules.build_L(1), modules.build_L(1, q2)) == 1
    with pytest.raises(InvalidModule):
        modules.hom_space(modules.build_L(1, q2), modules.build_L(1, q32))

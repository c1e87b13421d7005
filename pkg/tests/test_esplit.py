"""e-split Levi subgroups: dataset versus brute-force enumeration."""

import pytest

from cycloblocks.esplit import (
    enumerate_e_split_levis,
    sylow_e_torus_multiplicity,
    weyl_elements,
)
from cycloblocks.genorder import cyclotomic_poly
from cycloblocks.rattype import group_order, parse_rational_type
from cycloblocks.rootdata import build_root_system
from cycloblocks.unipdb import ambient_rational_type, load_dataset


@pytest.fixture(scope="module")
def db():
    return load_dataset(validate=False)


class TestSylowMultiplicity:
    def test_split_rank(self):
        assert sylow_e_torus_multiplicity(parse_rational_type("E8(q)"), 1) == 8

    def test_2e6(self):
        assert sylow_e_torus_multiplicity(parse_rational_type("2E6(q)"), 2) == 6

    def test_e8_phi4(self):
        assert sylow_e_torus_multiplicity(parse_rational_type("E8(q)"), 4) == 4


class TestBruteForceOracle:
    @pytest.mark.parametrize("label", ["A1", "A2", "A3"])
    @pytest.mark.parametrize("e", [1, 2])
    def test_dataset_matches_enumeration(self, db, label, e):
        stored = {l.label for l in db.e_split_levis(label, e)}
        computed = enumerate_e_split_levis(label, e)
        assert stored == computed

    def test_a1_spec_example(self):
        assert enumerate_e_split_levis("A1", 1) == {"Phi1", "A1(q)"}

    def test_contains_g(self):
        for label, e in (("A2", 1), ("A3", 2), ("B2", 2)):
            assert f"{label}(q)" in enumerate_e_split_levis(label, e)


class TestStoredLattices:
    def test_contains_g_and_minimal(self, db):
        for (ambient, e), labels in sorted(db.levis.items()):
            amb = ambient_rational_type(ambient)
            exps = []
            for lab in labels:
                from cycloblocks.esplit import ESplitLevi

                levi = ESplitLevi(ambient, e, lab)
                exps.append(levi.rational_type.torus.multiplicity(e))
            assert exps.count(max(exps)) == 1  # minimal e-split Levi is unique

    def test_sylow_containment_and_divisibility(self, db):
        from cycloblocks.esplit import ESplitLevi

        for (ambient, e), labels in sorted(db.levis.items()):
            amb_order = group_order(ambient_rational_type(ambient))
            for lab in labels:
                lo = group_order(ESplitLevi(ambient, e, lab).rational_type)
                assert lo.multiplicity(e) == amb_order.multiplicity(e)
                for q in (3, 5):
                    assert amb_order.evaluate_int(q) % lo.evaluate_int(q) == 0

    def test_e7_table_levis_present(self, db):
        labels = {l.label for l in db.e_split_levis("E7", 1)}
        assert {"Phi1^7", "Phi1^3.D4(q)", "Phi1.D6(q)", "E7(q)"} <= labels


class TestRelativeWeylOracle:
    """Reflection-coset computation of W(S_e) for rank <= 4 split types.

    Two independent computations must agree: the centralizer C_W(w) of a
    Phi_e-maximal element, and the setwise-over-pointwise stabilizer of the
    Phi_e-eigenspace.
    """

    @pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "G2"])
    @pytest.mark.parametrize("e", [1, 2])
    def test_two_computations_agree(self, label, e):
        from fractions import Fraction

        rs = build_root_system(label)
        W = weyl_elements(label)
        n = rs.rank
        phi = cyclotomic_poly(e)

        def phi_rank(w):
            # dimension of ker Phi_e(w)
            mat = [[Fraction(0)] * n for _ in range(n)]
            power = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
            for i in range(n):
                mat[i][i] = Fraction(phi[0])
            for c in phi[1:]:
                power = [
                    [sum(Fraction(w[i][k]) * power[k][j] for k in range(n)) for j in range(n)]
                    for i in range(n)
                ]
                for i in range(n):
                    for j in range(n):
                        mat[i][j] += c * power[i][j]
            from cycloblocks.esplit import _kernel_basis

            return _kernel_basis(mat)

        best_w, best_kernel = None, []
        for w in W:
            k = phi_rank(w)
            if len(k) > len(best_kernel):
                best_w, best_kernel = w, k

        def centralizer_order(w):
            def mul(a, b):
                return tuple(
                    tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                    for i in range(n)
                )

            return sum(1 for g in W if mul(g, w) == mul(w, g))

        def stab_over_fix(kernel):
            span = kernel
            sw, fx = 0, 0
            for g in W:
                imgs = [
                    [sum(Fraction(g[i][k]) * v[k] for k in range(n)) for i in range(n)]
                    for v in span
                ]
                from cycloblocks.esplit import _solve_in_span

                try:
                    coords = [_solve_in_span(span, img) for img in imgs]
                except Exception:
                    continue
                back = [
                    [sum(c[j] * span[j][i] for j in range(len(span))) for i in range(n)]
                    for c in coords
                ]
                if all(b == i for b, i in zip(back, imgs)):
                    sw += 1
                    if all(i == list(v) for i, v in zip(imgs, span)):
                        fx += 1
            return sw // fx

        assert centralizer_order(best_w) == stab_over_fix(best_kernel)

    def test_g2_values(self):
        # for G2 the Sylow Phi_1- and Phi_2-tori have relative Weyl group W(G2)
        from fractions import Fraction

        W = weyl_elements("G2")
        assert len(W) == 12


class TestStoredRelweyl:
    def test_spec_rows(self, db):
        assert db.relative_weyl_group("E6ad", "Phi1^6", "1", "A5A1").label == "A5xA1"
        assert db.relative_weyl_group("E6ad", "Phi1^2Phi2^4", "1", "A5A1").label == "C3xA1"
        rw = db.relative_weyl_group("E8", "Phi4.2D6(q)", "6chars", "o6")
        assert rw.label == "Z4xA1" and rw.order == 8

    def test_missing_pair(self, db):
        from cycloblocks.unipdb import DatasetError

        with pytest.raises(DatasetError):
            db.relative_weyl_group("E6ad", "Phi1^6", "D4[1]")

    def test_orders_match_labels(self, db):
        from cycloblocks.unipdb import coxeter_label_order

        for (ambient, levi, lam), rw in db.relweyl.items():
            assert rw.order == coxeter_label_order(rw.label)

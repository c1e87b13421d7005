"""Root systems: reflection closure, Poincare degrees, diagrams."""

import pytest

from cycloblocks.rootdata import (
    DiagramAutomorphism,
    build_root_system,
    classify_diagram,
    extended_diagram,
    standard_automorphism,
    weyl_degrees,
    weyl_order,
)
from cycloblocks.esplit import weyl_orbit_order

# hardcoded oracle table (kept out of the library on purpose)
DEGREE_TABLE = {
    "A1": (2,),
    "A2": (2, 3),
    "A3": (2, 3, 4),
    "A4": (2, 3, 4, 5),
    "B2": (2, 4),
    "B3": (2, 4, 6),
    "C3": (2, 4, 6),
    "B4": (2, 4, 6, 8),
    "D4": (2, 4, 4, 6),
    "D5": (2, 4, 5, 6, 8),
    "D6": (2, 4, 6, 6, 8, 10),
    "D8": (2, 4, 6, 8, 8, 10, 12, 14),
    "G2": (2, 6),
    "F4": (2, 6, 8, 12),
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
}


class TestClosure:
    @pytest.mark.parametrize(
        "label,count", [("A1", 2), ("G2", 12), ("E8", 240), ("F4", 48), ("D4", 24), ("E6", 72)]
    )
    def test_root_counts(self, label, count):
        rs = build_root_system(label)
        assert len(rs.roots) == count
        assert len(rs.positive_roots) == count // 2

    def test_closed_under_negation(self):
        rs = build_root_system("F4")
        roots = set(rs.roots)
        assert all(tuple(-c for c in r) in roots for r in roots)

    def test_idempotent(self):
        # reapplying simple reflections adds nothing
        rs = build_root_system("E6")
        roots = set(rs.roots)
        for r in roots:
            for i in range(rs.rank):
                assert rs.reflect(i, r) in roots

    def test_heights_positive(self):
        rs = build_root_system("E7")
        hts = rs.heights
        assert min(hts.values()) == 1
        assert max(hts.values()) == 17  # height of the highest root of E7

    def test_unknown_label(self):
        with pytest.raises(ValueError):
            build_root_system("H3")
        with pytest.raises(ValueError):
            build_root_system("E9")


class TestDegrees:
    @pytest.mark.parametrize("label", sorted(DEGREE_TABLE))
    def test_against_table(self, label):
        assert weyl_degrees(build_root_system(label)) == DEGREE_TABLE[label]

    def test_g2_order(self):
        assert weyl_order(build_root_system("G2")) == 12

    def test_e8_order(self):
        assert weyl_order(build_root_system("E8")) == 696729600

    def test_exponent_sum(self):
        for label in DEGREE_TABLE:
            rs = build_root_system(label)
            assert sum(d - 1 for d in weyl_degrees(rs)) == len(rs.positive_roots)

    @pytest.mark.parametrize("label", ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "B4", "D4", "G2", "F4"])
    def test_orbit_stabilizer_oracle(self, label):
        # independent enumeration: orbit of a regular vector
        assert weyl_orbit_order(label) == weyl_order(build_root_system(label))


class TestExtendedDiagram:
    def test_a1_affine(self):
        ext = extended_diagram(build_root_system("A1"))
        assert len(ext.nodes) == 2

    def test_g2_triple_edge(self):
        ext = extended_diagram(build_root_system("G2"))
        bonds = sorted(
            ext.cartan[i][j] * ext.cartan[j][i]
            for i in range(3)
            for j in range(i + 1, 3)
            if ext.cartan[i][j]
        )
        assert bonds == [1, 3]  # a chain with one single and one triple edge

    def test_e8_nine_nodes(self):
        ext = extended_diagram(build_root_system("E8"))
        assert len(ext.nodes) == 9
        # lowest root pairs with exactly one simple root
        row = ext.cartan[0]
        assert sum(1 for j in range(1, 9) if row[j] != 0) == 1


class TestAutomorphisms:
    def test_triality_only_on_d4(self):
        aut = standard_automorphism("D4", 3)
        assert aut.order == 3
        with pytest.raises(ValueError):
            DiagramAutomorphism("D5", (2, 1, 0, 4, 3))  # breaks the Cartan matrix

    def test_e6_flip(self):
        aut = standard_automorphism("E6", 2)
        assert aut.order == 2

    def test_an_flip(self):
        assert standard_automorphism("A5", 2).order == 2

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            DiagramAutomorphism("A2", (0, 0))


class TestClassify:
    def test_round_trip(self):
        for label in DEGREE_TABLE:
            rs = build_root_system(label)
            got = classify_diagram([list(r) for r in rs.cartan])
            want = "B2" if label == "B2" else label
            if label == "C3":
                want = "C3"
            assert got == want

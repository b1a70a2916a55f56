from fractions import Fraction

import numpy as np
import pytest

from clifford4.entropy import (PAIR_CUTS, SINGLE_CUTS, Bipartition, FlatSpectrumViolation,
                               entanglement_entropy, fingerprint, gaussian_rank_batch,
                               schmidt_rank, schmidt_ranks_rows)
from clifford4.exact_state import ExactState
from clifford4.kets import parse_state

from conftest import sample_states
from oracles import schmidt_rank_sympy

U1234 = parse_state("1/2(|1111>+|1100>-|0011>-|0000>)")


class TestSchmidtRank:
    @pytest.mark.parametrize("cut", SINGLE_CUTS + PAIR_CUTS, ids=str)
    def test_product_state(self, cut):
        assert schmidt_rank(ExactState.zero(), cut) == 1

    def test_u_state(self):
        assert schmidt_rank(U1234, (1, 2)) == 1
        assert schmidt_rank(U1234, (1, 3)) == 4
        assert schmidt_rank(U1234, (1, 3)) == schmidt_rank_sympy(U1234, (1, 3))

    def test_against_sympy_on_sample(self, complex_atlas, rng):
        for s in sample_states(complex_atlas.states, 60, rng):
            for cut in SINGLE_CUTS + PAIR_CUTS:
                assert schmidt_rank(s, cut) == schmidt_rank_sympy(s, cut.side_a)

    def test_complement_side_same_rank(self, real_atlas):
        rows = real_atlas.states.rows
        for a, b in [((1, 2), (3, 4)), ((2,), (1, 3, 4))]:
            assert (schmidt_ranks_rows(rows, Bipartition(a))
                    == schmidt_ranks_rows(rows, Bipartition(b))).all()

    def test_non_flat_spectrum_detected(self):
        # (2|0000> + |1111>)/sqrt5 is not a stabilizer state: spectrum {4, 1}
        row = np.zeros((1, 33), dtype=np.int8)
        row[0, 1], row[0, 31] = 2, 1
        with pytest.raises(FlatSpectrumViolation):
            schmidt_ranks_rows(row, Bipartition((1,)))

    @pytest.mark.parametrize("side", [(), (1, 2, 3, 4), (0,), (5,)])
    def test_bad_bipartition(self, side):
        with pytest.raises(ValueError):
            Bipartition(side)


class TestGaussianRank:
    @pytest.mark.parametrize("m, rank", [
        ([[1, 0], [0, 1]], 2),
        ([[1, 1j], [1j, -1]], 1),
        ([[2, 4], [1, 2]], 1),
        ([[0, 0], [0, 0]], 0),
        ([[1 + 1j, 2], [1 - 1j, 1j]], 2),
        ([[1, 2, 3], [2, 4, 6], [1, 0, 1]], 2),
        ([[3, 1, 4, 1], [5, 9, 2, 6], [5, 3, 5, 8], [9, 7, 9, 3]], 4),
    ])
    def test_small(self, m, rank):
        m = np.array(m, dtype=complex)
        got = gaussian_rank_batch(m.real.astype(int)[None], m.imag.astype(int)[None])
        assert got[0] == rank == np.linalg.matrix_rank(m)

    def test_random_batch_matches_numpy(self):
        gen = np.random.default_rng(7)
        re = gen.integers(-2, 3, size=(300, 4, 4))
        im = gen.integers(-2, 3, size=(300, 4, 4))
        re[::3, 3] = re[::3, 0] + re[::3, 1]           # force some rank drops
        im[::3, 3] = im[::3, 0] + im[::3, 1]
        got = gaussian_rank_batch(re, im)
        want = [np.linalg.matrix_rank(r + 1j * i) for r, i in zip(re, im)]
        assert list(got) == want


class TestEntropy:
    @pytest.mark.parametrize("text, value", [
        ("|0000>", Fraction(0)),
        ("(1/sqrt2)(|1110>-|1101>)", Fraction(2, 3)),
        ("(1/sqrt2)(|1000>-|0111>)", Fraction(1)),
        ("1/2(|1111>+|1100>-|0011>-|0000>)", Fraction(4, 3)),
        ("1/2(|1111>-|1010>-|0101>-|0000>)", Fraction(5, 3)),
    ])
    def test_values(self, text, value):
        assert entanglement_entropy(parse_state(text)) == value

    def test_fingerprint(self):
        fp = fingerprint(parse_state("(1/sqrt2)(|1110>-|1101>)"))
        assert fp.single_entropies == (0, 0, 1, 1)
        assert fp.cut_entropies == (0, 1, 1)
        assert fp.support_size == 2
        assert fp.local_part().support_size is None

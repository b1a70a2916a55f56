import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clifford4.exact_state import ExactState, GaussianInt, rows_normalized
from clifford4.gates import (ALL_CNOTS, ALL_CZS, CNOT, CZ, FULL_C, FULL_R, LOCAL_C, LOCAL_R, P,
                             Circuit, Gate, GateSyntaxError, H, X, Z, apply_circuit,
                             apply_gate, apply_gate_rows, generator_set, parse_circuit,
                             parse_gate)
from clifford4.kets import parse_state

from conftest import sample_states
from oracles import gate_matrix, vector

ALL_GATES = LOCAL_C.gates + LOCAL_R.gates[4:] + tuple(X(q) for q in range(1, 5)) + ALL_CNOTS + ALL_CZS
gates_st = st.lists(st.sampled_from(FULL_C.gates), max_size=20)


def ket(text):
    return parse_state(text)


class TestGateTokens:
    def test_cz_is_unordered(self):
        assert CZ(3, 1) == CZ(1, 3)

    def test_cnot_is_ordered(self):
        assert CNOT(1, 2) != CNOT(2, 1)

    @pytest.mark.parametrize("kind, qubits", [("H", (0,)), ("P", (5,)), ("CNOT", (2, 2)),
                                              ("CZ", (1,)), ("Y", (1,))])
    def test_invalid(self, kind, qubits):
        with pytest.raises(ValueError):
            Gate(kind, qubits)

    def test_generator_sets(self):
        assert len(LOCAL_C) == len(LOCAL_R) == 8
        assert len(FULL_C) == len(FULL_R) == 20
        assert generator_set("FULL_R") is FULL_R
        with pytest.raises(ValueError):
            generator_set("NOPE")

    def test_cnot_count(self):
        c = Circuit([H(1), CNOT(1, 2), CZ(2, 3), P(4)])
        assert c.cnot_count() == 2 and len(c) == 4


class TestAction:
    def test_controlled_flip(self):
        assert apply_gate(ket("|1000>"), CNOT(1, 2)) == ket("|1100>")

    def test_hadamard(self):
        s = apply_gate(ExactState.zero(), H(1))
        assert s.k == 1 and s.amps[0] == s.amps[8] == GaussianInt(1, 0)
        assert sum(1 for z in s.amps if z) == 2

    def test_hadamard_involution(self):
        assert apply_gate(apply_gate(ExactState.zero(), H(1)), H(1)) == ExactState.zero()

    def test_phase(self):
        s = apply_circuit(ExactState.zero(), [H(1), P(1)])
        assert s == ket("1/sqrt2(|0000> + i|1000>)")

    def test_empty_circuit(self):
        s = ket("1/sqrt2(|0110> - |1001>)")
        assert apply_circuit(s, Circuit()) == s

    def test_ghz(self):
        c = Circuit([H(1), CNOT(1, 2), CNOT(2, 3), CNOT(3, 4)])
        assert apply_circuit(ExactState.zero(), c) == ket("1/sqrt2(|0000> + |1111>)")

    @settings(max_examples=40, deadline=None)
    @given(gates_st)
    def test_circuit_then_inverse(self, word):
        s = apply_circuit(ExactState.zero(), [H(2), P(2), CNOT(2, 4)])
        c = Circuit(word)
        assert apply_circuit(apply_circuit(s, c), c.inverse()) == s

    @pytest.mark.parametrize("g", ALL_GATES, ids=str)
    def test_matches_matrix_oracle(self, g, complex_atlas, rng):
        states = sample_states(complex_atlas.states, 60, rng)
        U = gate_matrix(g)
        for s in states:
            np.testing.assert_allclose(vector(apply_gate(s, g)), U @ vector(s), atol=1e-12)


class TestIdentities:
    @pytest.mark.parametrize("g, order", [(H(1), 2), (P(2), 4), (Z(3), 2), (X(4), 2),
                                          (CNOT(1, 3), 2), (CZ(2, 4), 2), (CNOT(4, 1), 2)])
    def test_gate_orders(self, g, order, complex_atlas, rng):
        rows = complex_atlas.states.rows[sorted(rng.sample(range(293760), 2000))]
        out = rows
        for n in range(1, order + 1):
            out = apply_gate_rows(out, g)
            if n < order:
                assert not (out == rows).all(axis=1).all()
        assert (out == rows).all()

    @pytest.mark.parametrize("i, j", [(1, 2), (1, 4), (2, 3), (3, 4)])
    def test_cz_is_conjugated_cnot(self, i, j, complex_atlas, rng):
        basis = [ExactState.basis(b) for b in range(16)]
        for s in basis + sample_states(complex_atlas.states, 300, rng):
            assert apply_gate(s, CZ(i, j)) == apply_circuit(s, [H(j), CNOT(i, j), H(j)])

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_x_is_hzh(self, q, real_atlas):
        rows = real_atlas.states.rows
        assert (apply_gate_rows(rows, X(q)) == apply_gate_rows(
            apply_gate_rows(apply_gate_rows(rows, H(q)), Z(q)), H(q))).all()

    def test_norm_preserved_on_real_set(self, real_atlas):
        for g in FULL_R.gates + ALL_CZS + tuple(P(q) for q in range(1, 5)):
            assert rows_normalized(apply_gate_rows(real_atlas.states.rows, g)).all()

    def test_norm_preserved_on_complex_sample(self, complex_atlas, rng):
        rows = complex_atlas.states.rows[sorted(rng.sample(range(293760), 12000))]
        for g in FULL_C.gates + ALL_CZS:
            assert rows_normalized(apply_gate_rows(rows, g)).all()


class TestSyntax:
    @pytest.mark.parametrize("text, gate", [("H1", H(1)), ("P3", P(3)), ("Z2", Z(2)),
                                            ("X4", X(4)), ("CNOT(1,2)", CNOT(1, 2)),
                                            ("CZ( 4 , 2 )", CZ(2, 4))])
    def test_parse_gate(self, text, gate):
        assert parse_gate(text) == gate

    @pytest.mark.parametrize("text", ["H5", "CNOT(1,1)", "Y1", "CZ(1)", ""])
    def test_parse_gate_errors(self, text):
        with pytest.raises(GateSyntaxError):
            parse_gate(text)

    def test_circuit_roundtrip(self):
        c = Circuit([H(1), CNOT(1, 2), CZ(3, 4), P(2)])
        assert str(c) == "H1, CNOT(1,2), CZ(3,4), P2"
        assert parse_circuit(str(c)) == c
        assert parse_circuit("") == Circuit()

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snbasis.graphs import enumerate_graphs
from snbasis.harmonic_model import ALL_SIGNATURES, ModelParams, first_order_coefficients
from snbasis.invariants import CoefficientTable, InvariantTensor, reconstruct
from snbasis.io import (FormatError, parse_table, parse_tables, parse_tensor, write_table,
                        write_tables, write_tensor)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def test_tensor_file_layout():
    t = InvariantTensor.zeros("grr", 3)
    t[((1, 3), 2, 2)] = 0.1
    text = write_tensor(t)
    assert text.splitlines() == ["SNTENSOR v1", "g r r", "N=3", "(1,3) 2 2 0.1"]


@settings(max_examples=60, deadline=None)
@given(sig=st.sampled_from(["r", "g", "gr", "gg", "rrr", "ggr"]),
       values=st.lists(finite, min_size=1, max_size=5), seed=st.integers(0, 1000))
def test_tensor_round_trip_bit_exact(sig, values, seed):
    n = 3
    t = InvariantTensor.zeros(sig, n)
    flat = t.values.reshape(-1)
    rng = np.random.default_rng(seed)
    flat[rng.choice(flat.size, len(values))] = values
    t.values[t.values == 0] = 0.0  # a negative zero is an absent entry
    back = parse_tensor(write_tensor(t))
    assert back.signature == t.signature and back.n_particles == n
    assert back.values.tobytes() == t.values.tobytes()
    assert write_tensor(back) == write_tensor(t)


@pytest.mark.parametrize("text", [
    "",
    "SNTENSOR v2\nr\nN=3\n",
    "SNTENSOR v1\nx\nN=3\n",
    "SNTENSOR v1\nr\nN=three\n",
    "SNTENSOR v1\nr\nN=3\n1 2 0.5\n",
    "SNTENSOR v1\ng\nN=3\n(2,1) 0.5\n",
    "SNTENSOR v1\nr\nN=3\n7 0.5\n",
    "SNTENSOR v1\nr\nN=3\n1 abc\n",
])
def test_tensor_parse_errors(text):
    with pytest.raises(FormatError):
        parse_tensor(text)


@settings(max_examples=60, deadline=None)
@given(sig=st.sampled_from(list(ALL_SIGNATURES)), data=st.data())
def test_table_round_trip_bit_exact(sig, data):
    graphs = enumerate_graphs(sig, 6)
    vals = data.draw(st.lists(finite, min_size=len(graphs), max_size=len(graphs)))
    c = CoefficientTable(sig, 6, dict(zip(graphs, vals)))
    text = write_table(c)
    back = parse_table(text)
    assert write_table(back) == text
    for g in graphs:
        assert np.float64(back[g]).tobytes() == np.float64(c[g]).tobytes()


def test_fraction_values_round_trip():
    c = CoefficientTable("gg", 5, {enumerate_graphs("gg", 5)[0]: Fraction(1, 3)})
    text = write_table(c)
    assert "1/3" in text
    assert parse_table(text) == c


def test_multiple_tables_round_trip():
    coeffs = first_order_coefficients(ModelParams.from_lambda(5, 3.0))
    text = write_tables(coeffs[s] for s in ALL_SIGNATURES)
    back = parse_tables(text)
    assert [t.signature for t in back] == [coeffs[s].signature for s in ALL_SIGNATURES]
    assert write_tables(back) == text


def test_table_parse_errors():
    with pytest.raises(FormatError):
        parse_table("E(1,2) 1 2\n")
    with pytest.raises(FormatError):
        parse_table("Q(1) 1\n")
    with pytest.raises(FormatError):
        parse_table("# signature=gg\n# N=4\nE(1,2)+E(3,4)+E(5,6) 1\n")


def test_decompose_of_written_tensor():
    coeffs = first_order_coefficients(ModelParams.from_lambda(4, 2.0))
    t = parse_tensor(write_tensor(reconstruct(coeffs["ggg"])))
    assert np.array_equal(t.values, reconstruct(coeffs["ggg"]).values)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtransversal import catalog, sweeps
from qtransversal.errors import CodeFileError, ValidationError
from qtransversal.fileformats import (
    format_code_file,
    load_code,
    parse_code_file,
    parse_gate_file,
    parse_generator,
)
from qtransversal.stabilizer import CodeSpec


def test_bell_pair_file():
    spec = parse_code_file("d=2 n=2\nstabilizer:\nXX\nZZ\n")
    assert (spec.d, spec.n, spec.k, spec.stabilizer.order) == (2, 2, 0, 4)


def test_qutrit_token_file():
    spec = parse_code_file("d=3 n=3\nstabilizer:\nx1z0,x1z0,x1z0\nx0z1,x0z1,x0z1\n")
    assert spec.stabilizer.order == 9 and spec.k == 1


def test_xz_zx_is_valid_but_xi_zi_is_not():
    assert parse_code_file("d=2 n=2\nstabilizer:\nXZ\nZX\n").stabilizer.order == 4
    with pytest.raises(ValidationError) as exc:
        parse_code_file("d=2 n=2\nstabilizer:\nXI\nZI\n")
    assert exc.value.witness is not None


@pytest.mark.parametrize("text,line,col", [
    ("d=2\nstabilizer:\nXX", 1, 1),
    ("d=2 n=2\nstabilizer:\nXQ", 3, 2),
    ("d=2 n=2\nfoo:\nXX", 2, 1),
    ("d=2 n=2\nstabilizer:\nXXX", 3, 1),
    ("d=3 n=2\nstabilizer:\nx1z0,x1", 3, 6),
    ("d=3 n=2\nstabilizer:\nXX", 3, 1),
    ("d=2 n=2 n=3\nstabilizer:\nXX", 1, 9),
    ("d=2 n=2\nXX", 2, 1),
])
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(CodeFileError) as exc:
        parse_code_file(text)
    assert (exc.value.line, exc.value.column) == (line, col)


def test_signs_phases_and_comments():
    p = parse_generator("-iXY", 2, 2)
    assert p.label() == "-iXY"
    q = parse_generator("w2,x1z0,x0z1", 3, 2)
    assert q.phase == 2
    spec = parse_code_file("# header comment\nd=2 n=2 name=pair  # trailing\nstabilizer:\nXX\n-YY\n")
    assert spec.name == "pair" and spec.stabilizer.contains(parse_generator("ZZ", 2, 2))


@pytest.mark.parametrize("name", catalog.names())
def test_catalog_round_trip(name):
    spec = catalog.get(name)
    text = format_code_file(spec)
    again = parse_code_file(text)
    assert format_code_file(again) == text
    assert np.array_equal(again.stabilizer.keys, spec.stabilizer.keys)
    assert np.array_equal(again.stabilizer.phases, spec.stabilizer.phases)
    assert (again.k, again.distance) == (spec.k, spec.distance)


@given(st.integers(0, 10**6), st.sampled_from([(2, 4), (3, 3), (4, 2), (6, 2)]))
@settings(max_examples=30, deadline=None)
def test_random_round_trip(seed, dn):
    S = next(sweeps.random_corpus(*dn, 1, seed))
    spec = CodeSpec("rand", S)
    text = format_code_file(spec)
    again = parse_code_file(text)
    assert format_code_file(again) == text
    assert np.array_equal(again.stabilizer.phases, S.phases)


def test_gauge_section():
    spec = parse_code_file("d=2 n=4 k=1 gauge=1\nstabilizer:\nXXXX\nZZZZ\ngauge:\nXXII\nZIZI\n")
    assert len(spec.gauge) == 2 and spec.gauge_count == 1
    assert parse_code_file(format_code_file(spec)).gauge == spec.gauge


def test_load_code(tmp_path):
    assert load_code("steane").name == "steane"
    f = tmp_path / "b.code"
    f.write_text("d=2 n=2\nstabilizer:\nXX\nZZ\n")
    assert load_code(str(f)).stabilizer.order == 4
    with pytest.raises(CodeFileError):
        load_code(str(tmp_path / "missing"))


def test_gate_files():
    g = parse_gate_file("all: H\n1: Z(pi/8)\n3 4: matrix [[1,0],[0,1j]]\n", 2, 7)
    assert g.r == 1 and g.n == 7
    assert np.allclose(g.factors[0], np.diag([np.exp(1j * np.pi / 8), np.exp(-1j * np.pi / 8)]))
    assert np.allclose(g.factors[2], np.diag([1, 1j]))
    g = parse_gate_file("r=2\nall: CNOT\n", 2, 7)
    assert g.r == 2 and g.factors[0].shape == (4, 4)
    g = parse_gate_file("all: T\n", 2, 3, r=2)
    assert g.factors[0].shape == (4, 4)
    assert np.allclose(parse_gate_file("", 3, 2).factors[1], np.eye(3))


@pytest.mark.parametrize("text", [
    "all: Q", "9: H", "1: Z(import os)", "1: matrix [[1,1],[0,1]]", "r=2\n1: matrix [[1]]", "junk",
])
def test_bad_gate_files(text):
    with pytest.raises(CodeFileError):
        parse_gate_file(text, 2, 3)

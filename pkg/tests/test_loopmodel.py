import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import matchings
from wheelworks import loopmodel
from wheelworks.config import Config
from wheelworks.errors import CapacityError
from wheelworks.fpl import asm, count_by_pattern
from wheelworks.loopmodel import (
    StationaryVector, add_row, calibrate_orientation, dihedral_orbits, hamiltonian,
    hamiltonian_fixed_point, perron_certificate, stationary_hamiltonian, stationary_markov,
    tl_matrix, tl_relations_check, transition_matrix,
)
from wheelworks.matchings import all_matchings, catalan, fully_nested, parse_matching, reflect, rotate

P = parse_matching


def test_small_hamiltonians():
    assert hamiltonian(1).toarray().tolist() == [[2]]
    for o in ("precompose", "transpose"):
        h = hamiltonian(2, o).toarray()
        assert h.shape == (2, 2)
    pre = hamiltonian(3, "precompose").toarray()
    assert (pre.sum(axis=1) == 6).all()
    assert (hamiltonian(3, "transpose").toarray() == pre.T).all()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_perron_certificate(n):
    cert = perron_certificate(hamiltonian(n, "transpose"), 2 * n)
    assert cert["kernel_dimension_one"]
    assert not perron_certificate(hamiltonian(n, "precompose"), 2 * n)["column_sums_constant"] or n < 3


def test_calibration():
    assert calibrate_orientation(3) == "transpose"
    assert calibrate_orientation(3) == "transpose"
    # at n = 2 the two orientations cannot be told apart
    for o in ("precompose", "transpose"):
        assert hamiltonian_fixed_point(2, o).values == {P("()()"): 1, P("(())"): 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_fixed_point_equals_fpl_counts(n):
    assert stationary_hamiltonian(n).values == count_by_pattern(n).counts


@pytest.mark.parametrize("n", range(1, 8))
def test_solver_routes_agree(n):
    routes = {m: hamiltonian_fixed_point(n, "transpose", m) for m in ("dihedral", "sparse", "float")}
    assert routes["dihedral"].values == routes["sparse"].values == routes["float"].values
    assert routes["dihedral"].meta["route"].startswith("dihedral")


def test_dihedral_orbits():
    for n in range(1, 8):
        reps, label = dihedral_orbits(n)
        assert len(label) == catalan(n) and label.max() == len(reps) - 1
        idx = {pi: k for k, pi in enumerate(all_matchings(n))}
        for pi, k in idx.items():
            assert label[idx[rotate(pi)]] == label[k] == label[idx[reflect(pi)]]
    assert len(dihedral_orbits(3)[0]) == 2


@pytest.mark.parametrize("n", [6, 7, 8, 9])
def test_large_fixed_points(n):
    vals = stationary_hamiltonian(n).values
    assert all(Fraction(v).denominator == 1 and v > 0 for v in vals.values())
    assert all(vals[rotate(pi)] == vals[pi] for pi in vals)
    assert vals[fully_nested(n)] == 1
    assert sum(vals.values()) == asm(n)
    # observed: the all-small-arches component is the previous ASM number
    assert vals[P("()" * n)] == asm(n - 1)


def test_tl_relations():
    for n in (1, 2, 3):
        assert tl_relations_check(n, 1)
        assert tl_relations_check(n, Fraction(5, 2))
    # a wrong loop weight breaks e_j^2 = tau e_j
    e = np.array(tl_matrix(2, 1, 1))
    assert not (e @ e == 2 * e).all()


def test_add_row_is_a_matching_map():
    for n in (1, 2, 3):
        for sigma in all_matchings(n):
            for fill in range(1 << (2 * n)):
                assert add_row(sigma, fill).n == n


@settings(max_examples=30)
@given(matchings(1, 3), st.data())
def test_add_row_rotation_covariance(sigma, data):
    m = 2 * sigma.n
    fill = data.draw(st.integers(0, (1 << m) - 1))
    rotated_fill = ((fill << 1) | (fill >> (m - 1))) & ((1 << m) - 1)
    assert add_row(rotate(sigma), rotated_fill) == rotate(add_row(sigma, fill))


def test_transition_matrix():
    assert transition_matrix(1, Fraction(1, 3)) == [[1]]
    t = transition_matrix(2, Fraction(1, 2))
    assert all(sum(col) == 1 for col in zip(*t))
    assert all((16 * x).denominator == 1 for row in t for x in row)
    with pytest.raises(ValueError):
        transition_matrix(2, 1)
    with pytest.raises(CapacityError):
        transition_matrix(6, Fraction(1, 2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_markov_is_p_independent(n):
    vecs = [stationary_markov(n, Fraction(a, b)).values for a, b in ((1, 3), (1, 2), (2, 3), (1, 7))]
    assert all(v == vecs[0] for v in vecs)
    counts = count_by_pattern(n).counts
    assert vecs[0] == {pi: Fraction(c, asm(n)) for pi, c in counts.items()}


def test_hamiltonian_cap():
    with pytest.raises(CapacityError):
        hamiltonian(13)


def test_vector_cache(tmp_path):
    cfg = Config(cache_dir=tmp_path)
    loopmodel.clear_memory_cache()
    first = stationary_hamiltonian(5, config=cfg)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert "calibration.json" in files and "stationary-hamiltonian-n5.json" in files
    loopmodel.clear_memory_cache()
    assert stationary_hamiltonian(5, config=cfg).values == first.values
    # a cache written under another calibration is ignored
    path = tmp_path / "stationary-hamiltonian-n5.json"
    data = json.loads(path.read_text())
    data["meta"]["orientation"] = "precompose"
    data["counts"][0]["count"] = "999"
    path.write_text(json.dumps(data))
    loopmodel.clear_memory_cache()
    assert stationary_hamiltonian(5, config=cfg).values == first.values
    loopmodel.clear_memory_cache()


def test_vector_json_round_trip():
    v = stationary_markov(3, Fraction(1, 2))
    back = StationaryVector.from_json(json.loads(json.dumps(v.to_json())))
    assert back.values == v.values and back.source == "markov"
    assert v.to_json()["counts"][0]["count"] == "2/7"

"""Tests for weighted cochain complexes and the convex solvers."""

from __future__ import annotations

from itertools import pairwise
import json

import networkx as nx
import numpy as np
import pytest
from scipy import sparse

from lp_hodge.discrete import (
    RESOLUTION,
    Cochain,
    CochainComplex,
    SolverConfig,
    brute_force_minimizer,
    complex_from_json,
    cycle_complex,
    disjoint_union,
    dump_cochain,
    dump_complex,
    duality_map_check,
    graph_complex,
    load_cochain,
    load_complex,
    minimality_certificate,
    norm_minimality,
    pcoclosed_primitive,
    pharmonic_representative,
    scalar_center,
    torsion_is_zero,
    uniqueness_probe,
)
from lp_hodge.exceptions import ComplexError, NotClosedError, NotExactError


def test_solver_config(config: dict) -> None:
    """Test solver settings and the smoothing schedule."""

    solver = SolverConfig.from_config(config, 3.0)
    schedule = solver.schedule()
    assert solver.p == 3.0
    assert schedule[0] == solver.eps_start
    assert schedule[-1] == solver.eps_stop
    assert all(b < a for a, b in pairwise(schedule))


def test_primitive_p2_is_pseudoinverse(config: dict, path3: CochainComplex) -> None:
    """Test the p = 2 primitive is the minimum-norm solution."""

    z = Cochain(1, [1.0, 2.0])
    result = pcoclosed_primitive(path3, z, SolverConfig.from_config(config, 2.0))
    expected = np.linalg.pinv(path3.d(0).toarray()) @ z.coeffs

    np.testing.assert_allclose(result.primitive.coeffs, expected, atol=1e-8)
    np.testing.assert_allclose(result.primitive.coeffs, [-4 / 3, -1 / 3, 5 / 3], atol=1e-8)
    assert result.representative is None


def test_primitive_p4_is_centered(config: dict, path3: CochainComplex) -> None:
    """Test the p = 4 primitive on a path is shifted by the L_4 center."""

    z = Cochain(1, [1.0, 2.0])
    result = pcoclosed_primitive(path3, z, SolverConfig.from_config(config, 4.0))
    potential = np.array([0.0, 1.0, 3.0])
    center = scalar_center(potential, np.ones(3), 4.0)

    np.testing.assert_allclose(result.primitive.coeffs, potential - center, atol=1e-6)
    np.testing.assert_allclose(path3.apply_d(result.primitive).coeffs, z.coeffs, atol=1e-10)
    assert result.dstar_residual < 1e-6


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_cycle_representative(p: float, config: dict, cycle4: CochainComplex) -> None:
    """Test the class of (4, 0, 0, 0) on C4 has representative (1, 1, 1, 1)."""

    z = Cochain(1, [4.0, 0.0, 0.0, 0.0])
    result = pharmonic_representative(cycle4, z, SolverConfig.from_config(config, p))

    np.testing.assert_allclose(result.representative.coeffs, 1.0, atol=1e-6)
    boundary = cycle4.apply_d(result.primitive).coeffs
    np.testing.assert_allclose(boundary, z.coeffs - result.representative.coeffs, atol=1e-8)
    assert result.residual <= config["solver"]["tol_grad"]
    assert norm_minimality(result, z)
    assert result.norm_ratio < 1


def test_weighted_cycle_representative(config: dict) -> None:
    """Test edge weights tilt the representative as w^{-1/(p-1)}."""

    graph = nx.cycle_graph(4, create_using=nx.DiGraph)
    nx.set_edge_attributes(graph, {(1, 2): 4.0, (3, 0): 4.0}, "weight")
    z = Cochain(1, [4.0, 0.0, 0.0, 0.0])
    result = pharmonic_representative(graph_complex(graph), z, SolverConfig.from_config(config, 3.0))

    np.testing.assert_allclose(result.representative.coeffs, [4 / 3, 2 / 3, 4 / 3, 2 / 3], atol=1e-6)


def test_energies_non_increasing(config: dict, rng: np.random.Generator) -> None:
    """Test recorded energies never increase across continuation stages."""

    graph = nx.cycle_graph(4, create_using=nx.DiGraph)
    nx.set_edge_attributes(graph, {(1, 2): 4.0, (3, 0): 4.0}, "weight")
    z = Cochain(1, [4.0, 0.0, 0.0, 0.0])
    start = rng.normal(scale=4.0, size=3)
    result = pharmonic_representative(graph_complex(graph), z, SolverConfig.from_config(config, 2.5), initial=start)

    energies = result.energies
    assert len(energies) > 0
    assert all(b <= a * (1 + RESOLUTION) + 1e-14 for a, b in pairwise(energies))


@pytest.mark.parametrize("p", [1.5, 2.5, 3.0, 4.0])
def test_random_starts_converge(p: float, config: dict, cycle4: CochainComplex, rng: np.random.Generator) -> None:
    """Test random initializations converge to the representative without stalling."""

    z = Cochain(1, [3.0, -1.0, 0.5, 2.0])
    solver = SolverConfig.from_config(config, p)

    for _ in range(40):
        result = pharmonic_representative(cycle4, z, solver, initial=rng.normal(scale=4.0, size=3))
        np.testing.assert_allclose(result.representative.coeffs, 1.125, atol=1e-6)


def test_uniqueness(config: dict, cycle4: CochainComplex) -> None:
    """Test random initializations reach the same representative."""

    z = Cochain(1, [3.0, -1.0, 0.5, 2.0])
    solver = SolverConfig.from_config(config, 3.0)
    assert uniqueness_probe(cycle4, z, solver, trials=5) < 1e-6
    exact = Cochain(1, [3.0, -1.0, -1.0, -1.0])
    assert uniqueness_probe(cycle4, exact, solver, trials=3, representative=False) < 1e-6


def test_minimality(config: dict, cycle4: CochainComplex) -> None:
    """Test the representative beats random feasible perturbations and a brute-force search."""

    z = Cochain(1, [3.0, -1.0, 0.5, 2.0])
    result = pharmonic_representative(cycle4, z, SolverConfig.from_config(config, 3.0))

    assert minimality_certificate(result, trials=50) >= -1e-10
    np.testing.assert_allclose(brute_force_minimizer(result), result.representative.coeffs, atol=1e-5)


def test_duality_map(config: dict, cycle4: CochainComplex) -> None:
    """Test f = |h|^{p-2}h of a representative is coclosed with matching norms."""

    z = Cochain(1, [3.0, -1.0, 0.5, 2.0])
    result = pharmonic_representative(cycle4, z, SolverConfig.from_config(config, 3.0))
    check = duality_map_check(cycle4, result.representative, 3.0, tolerance=1e-6)

    assert check.ok
    assert check.norm_p == pytest.approx(check.norm_conjugate)
    assert not duality_map_check(cycle4, z, 3.0).ok


def test_betti_numbers(cycle4: CochainComplex, path3: CochainComplex) -> None:
    """Test cohomology dimensions of cycles and trees."""

    assert torsion_is_zero(cycle4, 1).betti == 1
    assert torsion_is_zero(cycle4, 0).betti == 1

    union = disjoint_union(cycle4, cycle_complex(3))
    assert torsion_is_zero(union, 0).betti == 2
    assert torsion_is_zero(union, 1).betti == 2

    report = torsion_is_zero(path3, 1)
    assert (report.kernel_dimension, report.image_rank, report.betti) == (2, 2, 0)
    assert report.ok

    with pytest.raises(ComplexError):
        torsion_is_zero(path3, 2)


def test_validate_rejects_broken_complex() -> None:
    """Test validation of d∘d, shapes and weights."""

    matrix = sparse.csr_matrix([[1.0]])
    with pytest.raises(ComplexError):
        CochainComplex([1, 1, 1], [matrix, matrix]).validate()
    with pytest.raises(ComplexError):
        CochainComplex([1, 2], [matrix]).validate()
    with pytest.raises(ComplexError):
        CochainComplex([1, 1], [matrix], [np.ones(1), np.zeros(1)]).validate()


def test_membership_errors(config: dict, cycle4: CochainComplex, path3: CochainComplex) -> None:
    """Test non-exact, non-closed and degree 0 inputs."""

    solver = SolverConfig.from_config(config, 2.0)
    with pytest.raises(NotExactError):
        pcoclosed_primitive(cycle4, Cochain(1, [1.0, 0.0, 0.0, 0.0]), solver)
    with pytest.raises(NotExactError):
        pcoclosed_primitive(path3, Cochain(0, [1.0, 1.0, 1.0]), solver)
    with pytest.raises(NotClosedError):
        pharmonic_representative(path3, Cochain(0, [0.0, 1.0, 2.0]), solver)
    with pytest.raises(ComplexError):
        pharmonic_representative(path3, Cochain(1, [1.0]), solver)

    constant = pharmonic_representative(path3, Cochain(0, [2.0, 2.0, 2.0]), solver)
    np.testing.assert_allclose(constant.representative.coeffs, 2.0)
    assert constant.primitive is None


def test_json_files(tmp_path, cycle4: CochainComplex) -> None:
    """Test complex and cochain files."""

    dump_complex(cycle4, tmp_path / "complex.json")
    loaded = load_complex(tmp_path / "complex.json")
    assert loaded.dims == cycle4.dims
    np.testing.assert_array_equal(loaded.d(0).toarray(), cycle4.d(0).toarray())

    dump_cochain(Cochain(1, [4.0, 0.0, 0.0, 0.0]), tmp_path / "z.json")
    assert load_cochain(tmp_path / "z.json").degree == 1

    (tmp_path / "bad.json").write_text(json.dumps({"dims": [2, 1], "d": [{"k": 0, "rows": [0]}]}), encoding="utf-8")
    with pytest.raises(ComplexError):
        load_complex(tmp_path / "bad.json")
    with pytest.raises(ComplexError):
        load_cochain(tmp_path / "missing.json")
    with pytest.raises(ComplexError):
        complex_from_json({"dims": [2, 1], "weights": [[1.0, 1.0], [0.0]]})


@pytest.mark.parametrize("k", [-1, 1, 5])
def test_complex_from_json_degree_range(k: int) -> None:
    """Test differential entries outside the complex are rejected."""

    data = {"dims": [2, 1], "d": [{"k": k, "rows": [0, 0], "cols": [0, 1], "vals": [-1.0, 1.0]}]}
    with pytest.raises(ComplexError) as excinfo:
        complex_from_json(data)
    assert excinfo.value.translation_key == "invalid_complex"
    assert "outside 0..0" in str(excinfo.value)

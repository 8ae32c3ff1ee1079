"""Quantized symbols: ladder forms, quadrature cross-route, operator reports."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from landau_bgcs.bgcs import CoherentLabel, bgcs_state, mean_k3
from landau_bgcs.fock import SubspaceSpec, adjoint, ladder_matrix
from landau_bgcs.measure import build_grid
from landau_bgcs.quantize import (
    CommutatorReport,
    DecompositionReport,
    SymbolSpec,
    dispersions,
    dispersions_matrix_route,
    energy_commutators,
    energy_operator_decomposition_check,
    mean_matrix,
    mean_values_on_bgcs,
    quantize_by_quadrature,
    quantize_closed_form,
)


def _spec(m, depth=16):
    return SubspaceSpec(m, depth=depth)


@pytest.fixture(scope="module")
def grid():
    return build_grid(max_degree=24, max_mode=16)


# ------------------------------------------------------------ closed forms

def test_lowering_symbol_entries():
    op = quantize_closed_form(SymbolSpec("z"), _spec(0))
    assert op.entries[0, 1] == 1.0
    op3 = quantize_closed_form(SymbolSpec("z"), _spec(3))
    for nu in range(10):
        assert op3.entries[nu, nu + 1] == math.sqrt((nu + 1) * (nu + 4))
    assert op3.band == 1


def test_energy_symbol_diagonal():
    op = quantize_closed_form(SymbolSpec("abs_z_sq"), _spec(1))
    want = [(nu + 1) * (nu + 2) for nu in range(op.dim)]
    assert np.array_equal(np.diag(op.entries).real, want)


def test_adjoint_pairs():
    for m in (0, 2):
        az = quantize_closed_form(SymbolSpec("z"), _spec(m))
        azb = quantize_closed_form(SymbolSpec("z_bar"), _spec(m))
        assert np.array_equal(adjoint(az).entries, azb.entries)
        a2 = quantize_closed_form(SymbolSpec("z_sq"), _spec(m))
        a2b = quantize_closed_form(SymbolSpec("z_bar_sq"), _spec(m))
        assert np.array_equal(adjoint(a2).entries, a2b.entries)


def test_self_adjoint_symbols():
    for tag in ("q", "p", "abs_z_sq", "q_sq", "p_sq"):
        op = quantize_closed_form(SymbolSpec(tag), _spec(2))
        assert np.max(np.abs(op.entries - op.entries.conj().T)) == 0.0


@pytest.mark.parametrize("m", [0, 1, 3])
def test_lowering_raising_commutator_is_k3(m):
    sp = _spec(m)
    az = quantize_closed_form(SymbolSpec("z"), sp).entries
    azb = quantize_closed_form(SymbolSpec("z_bar"), sp).entries
    comm = az @ azb - azb @ az
    k3 = 2.0 * ladder_matrix("k3", sp).entries
    assert np.max(np.abs((comm - k3)[:-1, :-1])) < 1e-12


@pytest.mark.parametrize("m", [0, 2])
def test_coordinate_momentum_commutator(m):
    sp = _spec(m)
    q = quantize_closed_form(SymbolSpec("q"), sp).entries
    p = quantize_closed_form(SymbolSpec("p"), sp).entries
    want = 2j * ladder_matrix("k3", sp).entries
    assert np.max(np.abs((q @ p - p @ q - want)[:-1, :-1])) < 1e-12


def test_energy_symbol_is_ordered_product():
    sp = _spec(2)
    az = quantize_closed_form(SymbolSpec("z"), sp).entries
    azb = quantize_closed_form(SymbolSpec("z_bar"), sp).entries
    diag = quantize_closed_form(SymbolSpec("abs_z_sq"), sp).entries
    assert np.max(np.abs((az @ azb - diag)[:-1, :-1])) < 1e-12


def test_squared_symbol_is_square_of_symbol():
    # the double-step quantized symbol coincides with the matrix square of
    # the single-step one; no extra boundary corrections exist
    for m in (0, 1, 4):
        sp = _spec(m)
        az = quantize_closed_form(SymbolSpec("z"), sp).entries
        a2 = quantize_closed_form(SymbolSpec("z_sq"), sp).entries
        assert np.max(np.abs((az @ az - a2)[:-2, :-2])) < 1e-12


def test_symbol_validation():
    with pytest.raises(ValueError):
        SymbolSpec("w")
    with pytest.raises(ValueError):
        SymbolSpec("z", terms=((1, 0, 1.0),))
    with pytest.raises(ValueError):
        SymbolSpec("custom")
    with pytest.raises(ValueError):
        SymbolSpec("custom", terms=((-1, 0, 1.0),))
    with pytest.raises(ValueError):
        quantize_closed_form(SymbolSpec("custom", terms=((1, 1, 1.0),)), _spec(0))


def test_symbol_evaluation():
    z = 1.0 + 2.0j
    assert SymbolSpec("q").evaluate(z) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert SymbolSpec("p").evaluate(z) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-15)
    assert SymbolSpec("abs_z_sq").evaluate(z) == pytest.approx(5.0, rel=1e-15)
    custom = SymbolSpec("custom", terms=((1, 1, 2.0), (0, 0, -1.0)))
    assert custom.evaluate(z) == pytest.approx(9.0, rel=1e-15)
    assert custom.degree == 2


# ------------------------------------------------------------- quadrature

def _interior_err(a, b, margin):
    d = a[:a.shape[0] - margin, :a.shape[1] - margin] \
        - b[:b.shape[0] - margin, :b.shape[1] - margin]
    return float(np.max(np.abs(d)))


def test_quadrature_matches_closed_form_lowering(grid):
    sp = SubspaceSpec(0, depth=8)
    quad = quantize_by_quadrature(SymbolSpec("z"), sp, grid)
    closed = quantize_closed_form(SymbolSpec("z"), sp)
    assert _interior_err(quad.entries, closed.entries, 2) < 1e-6


def test_quadrature_constant_symbol_gives_identity(grid):
    sp = SubspaceSpec(1, depth=8)
    one = SymbolSpec("custom", terms=((0, 0, 1.0),))
    quad = quantize_by_quadrature(one, sp, grid)
    assert _interior_err(quad.entries, np.eye(9, dtype=complex), 2) < 1e-6


def test_quadrature_energy_symbol_diagonal(grid):
    sp = SubspaceSpec(1, depth=8)
    quad = quantize_by_quadrature(SymbolSpec("abs_z_sq"), sp, grid)
    want = np.diag([(nu + 1.0) * (nu + 2.0) for nu in range(9)]).astype(complex)
    assert _interior_err(quad.entries, want, 2) < 1e-6


def test_quadrature_quadratic_coordinate(grid):
    sp = SubspaceSpec(2, depth=8)
    quad = quantize_by_quadrature(SymbolSpec("q_sq"), sp, grid)
    closed = quantize_closed_form(SymbolSpec("q_sq"), sp)
    assert _interior_err(quad.entries, closed.entries, 2) < 1e-6


def test_quadrature_grid_validation(grid):
    with pytest.raises(ValueError):
        quantize_by_quadrature(SymbolSpec("z"), SubspaceSpec(0, depth=12), grid)
    big = SymbolSpec("custom", terms=((5, 5, 1.0),))
    with pytest.raises(ValueError):
        quantize_by_quadrature(big, SubspaceSpec(0, depth=8), grid)


# ------------------------------------------------------------ mean values

def test_mean_of_lowering_symbol_reproduces_label():
    lab = CoherentLabel.from_polar(1.2, 0.7)
    got = mean_values_on_bgcs(SymbolSpec("z"), lab, 2)
    assert got == pytest.approx(lab.z, rel=1e-10)
    got_bar = mean_values_on_bgcs(SymbolSpec("z_bar"), lab, 2)
    assert got_bar == pytest.approx(lab.z.conjugate(), rel=1e-10)


def test_mean_coordinates():
    lab = CoherentLabel.from_polar(1.5, 2.2)
    q = math.sqrt(2.0) * lab.rho * math.cos(lab.phi)
    p = math.sqrt(2.0) * lab.rho * math.sin(lab.phi)
    assert mean_values_on_bgcs(SymbolSpec("q"), lab, 1).real == pytest.approx(q, rel=1e-10)
    assert mean_values_on_bgcs(SymbolSpec("p"), lab, 1).real == pytest.approx(p, rel=1e-10)


def test_mean_of_squared_symbol():
    lab = CoherentLabel.from_polar(0.9, 1.1)
    got = mean_values_on_bgcs(SymbolSpec("z_sq"), lab, 0)
    assert got == pytest.approx(lab.z ** 2, rel=1e-9)


def test_mean_energy_symbol_and_orderings():
    lab, m = CoherentLabel.from_polar(2.0, 0.3), 1
    k3 = mean_k3(lab, m)
    got = mean_values_on_bgcs(SymbolSpec("abs_z_sq"), lab, m).real
    assert got == pytest.approx(lab.rho ** 2 + 2.0 * k3, rel=1e-8)

    state = bgcs_state(lab, SubspaceSpec(m))
    sp = SubspaceSpec(m, depth=state.depth)
    az = quantize_closed_form(SymbolSpec("z"), sp)
    azb = quantize_closed_form(SymbolSpec("z_bar"), sp)
    from landau_bgcs.fock import OperatorMatrix
    anti = OperatorMatrix(az.entries @ azb.entries, 2)
    normal = OperatorMatrix(azb.entries @ az.entries, 2)
    v = state.amplitudes
    assert mean_matrix(normal, v).real == pytest.approx(lab.rho ** 2, rel=1e-8)
    diff = mean_matrix(anti, v).real - mean_matrix(normal, v).real
    assert diff == pytest.approx(2.0 * k3, rel=1e-8)


def test_mean_matrix_validation():
    op = quantize_closed_form(SymbolSpec("z"), _spec(0, depth=8))
    with pytest.raises(ValueError):
        mean_matrix(op, np.zeros(5))


# ------------------------------------------------------------ dispersions

def test_dispersions_equal_k3():
    lab = CoherentLabel.from_polar(1.7, 0.5)
    dq2, dp2, prod = dispersions(lab, 2)
    k3 = mean_k3(lab, 2)
    assert dq2 == k3 and dp2 == k3
    assert prod == k3 * k3


def test_dispersion_product_saturates_uncertainty_floor():
    dq2, dp2, prod = dispersions(CoherentLabel.from_polar(1e-6, 0.0), 0)
    assert prod == pytest.approx(0.25, abs=1e-6)


def test_dispersion_product_large_label():
    _, _, prod = dispersions(CoherentLabel.from_polar(50.0, 0.0), 0)
    assert prod / (50.0 + 0.5) ** 2 == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("rho,phi,m", [(0.7, 0.9, 0), (2.0, 0.0, 1), (1.3, 2.5, 3)])
def test_dispersions_matrix_route(rho, phi, m):
    lab = CoherentLabel.from_polar(rho, phi)
    dq2, dp2 = dispersions_matrix_route(lab, m)
    k3 = mean_k3(lab, m)
    assert dq2 == pytest.approx(k3, rel=1e-8)
    assert dp2 == pytest.approx(k3, rel=1e-8)


# ---------------------------------------------------------------- reports

@pytest.mark.parametrize("m", [0, 1, 2, 5])
def test_energy_decomposition_interior_residuals_vanish(m):
    rep = energy_operator_decomposition_check(m, _spec(m, depth=16))
    assert isinstance(rep, DecompositionReport)
    assert rep.energy_split_max_err < 1e-12
    assert rep.symmetric_sum_max_err < 1e-12
    assert rep.max_interior_residual_q < 1e-12
    assert rep.max_interior_residual_p < 1e-12
    assert rep.residual_q_entries == ()
    assert rep.residual_p_entries == ()


def test_energy_decomposition_projector_hypothesis_rejected():
    # the single-entry corrections claimed for the squared-coordinate
    # quantization do not appear in the brute-force matrices
    rep0 = energy_operator_decomposition_check(0, _spec(0, depth=16))
    assert rep0.claimed_coefficient == pytest.approx(1.0)
    assert rep0.computed_at_claimed_entry_q == pytest.approx(0.0, abs=1e-15)
    assert not rep0.matches_claimed_projectors
    rep1 = energy_operator_decomposition_check(1, _spec(1, depth=16))
    assert rep1.claimed_coefficient == pytest.approx(math.sqrt(3.0))
    assert not rep1.matches_claimed_projectors


def test_energy_decomposition_edge_is_truncation_artifact():
    rep = energy_operator_decomposition_check(0, _spec(0, depth=16))
    # the full-matrix residual is confined to the truncation boundary
    assert rep.edge_residual_q > 1.0


def test_energy_decomposition_depth_validation():
    with pytest.raises(ValueError):
        energy_operator_decomposition_check(0, SubspaceSpec(0, depth=None))


def test_decomposition_report_serializable():
    rep = energy_operator_decomposition_check(2, _spec(2, depth=12))
    d = rep.as_dict()
    assert d["m"] == 2 and d["claimed_entry"] == [2, 0]
    assert isinstance(d["residual_q_entries"], list)


@pytest.mark.parametrize("m", [0, 1, 2, 4])
def test_energy_commutators_match_closed_forms(m):
    rep = energy_commutators(m, _spec(m, depth=20))
    assert isinstance(rep, CommutatorReport)
    assert rep.max_err < 1e-12
    assert len(rep.checks) == 4


def test_energy_commutator_example_entries():
    rep = energy_commutators(0, _spec(0, depth=12))
    by_name = {c.name: c for c in rep.checks}
    assert by_name["[abs_z_sq, z]"].example_value == pytest.approx(-3.0, rel=1e-14)
    assert by_name["[abs_z_sq, z_sq]"].example_value == pytest.approx(-16.0, rel=1e-14)
    rep1 = energy_commutators(1, _spec(1, depth=12))
    zb = {c.name: c for c in rep1.checks}["[abs_z_sq, z_bar]"]
    assert zb.example_value == pytest.approx(6.0 * math.sqrt(6.0), rel=1e-14)
    assert zb.expected_value == pytest.approx(6.0 * math.sqrt(6.0), rel=1e-14)


def test_commutator_report_serializable():
    rep = energy_commutators(1, _spec(1, depth=12))
    d = rep.as_dict()
    assert len(d["checks"]) == 4
    assert d["max_err"] == rep.max_err


# --------------------------------------------------------------- properties

@settings(max_examples=40, deadline=None)
@given(m=st.integers(min_value=0, max_value=12),
       depth=st.integers(min_value=8, max_value=24))
def test_adjoint_symmetry_property(m, depth):
    sp = SubspaceSpec(m, depth=depth)
    az = quantize_closed_form(SymbolSpec("z"), sp)
    azb = quantize_closed_form(SymbolSpec("z_bar"), sp)
    assert np.array_equal(az.entries.T.conj(), azb.entries)
    q = quantize_closed_form(SymbolSpec("q"), sp)
    assert np.array_equal(q.entries, q.entries.conj().T)


@settings(max_examples=25, deadline=None)
@given(m=st.integers(min_value=0, max_value=8))
def test_decomposition_residual_property(m):
    rep = energy_operator_decomposition_check(m, SubspaceSpec(m, depth=10))
    assert rep.max_interior_residual_q < 1e-12
    assert rep.max_interior_residual_p < 1e-12

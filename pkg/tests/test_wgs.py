import math
import random

import numpy as np
import pytest

from shared.metrics.fidelity import fidelity_with_pure, ghz_state
from shared.qsim.ops import H, X, Z, apply_controlled_phase, apply_single_qubit_gate
from shared.qsim.states import DensityMatrix, NoiseKind, NoiseSpec, PureState
from shared.wgs.builder import build_noisy_state, build_state, build_uniform_chain, plus_state
from shared.wgs.graph import (
    ChainSpec,
    GraphParseError,
    WeightedGraph,
    load_graph,
    normalize_angle,
    parse_angle,
    parse_graph,
    path_graph,
    star_graph,
)


# ── Angles ───────────────────────────────────────────────────

@pytest.mark.parametrize(
    "text, expected",
    [
        ("0.8pi", 0.8 * math.pi),
        ("pi", math.pi),
        ("-pi", -math.pi),
        ("0.5*pi", 0.5 * math.pi),
        ("2.5", 2.5),
        (".25pi", 0.25 * math.pi),
    ],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, abs=1e-15)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError, match="Not an angle"):
        parse_angle("0.8 radians")


@pytest.mark.parametrize(
    "phi, expected",
    [(-math.pi, math.pi), (1.5 * math.pi, -0.5 * math.pi), (0.3, 0.3), (2 * math.pi + 0.3, 0.3)],
)
def test_normalize_angle(phi, expected):
    assert normalize_angle(phi) == pytest.approx(expected, abs=1e-12)


# ── Graph model ──────────────────────────────────────────────

def test_graph_rejects_self_loop_and_duplicates():
    with pytest.raises(ValueError, match="Self-loop"):
        WeightedGraph(3, [(2, 2, 1.0)])
    with pytest.raises(ValueError, match="Duplicate"):
        WeightedGraph(3, [(1, 2, 1.0), (2, 1, 0.5)])
    with pytest.raises(ValueError, match="out of range"):
        WeightedGraph(3, [(1, 4, 1.0)])


def test_path_and_star_constructors():
    path = path_graph([0.1, 0.2, 0.3])
    assert path.num_vertices == 4
    assert path.is_path()
    assert path.weight(3, 2) == pytest.approx(0.2)

    star = star_graph(4)
    assert not star.is_path()
    assert {(e.a, e.b) for e in star.edges} == {(1, 2), (1, 3), (1, 4)}


def test_chain_spec_graph():
    spec = ChainSpec(2, 0.8 * math.pi)
    graph = spec.graph()
    assert spec.num_qubits == 5
    assert graph.is_path()
    assert all(e.weight == pytest.approx(0.8 * math.pi) for e in graph.edges)


# ── Text format ──────────────────────────────────────────────

def test_parse_graph_round_trip():
    text = """
    # three-qubit chain with a coherent error
    vertices 3
    edge 1 2 0.8pi
    edge 2 3 0.6pi   # second edge
    """
    graph = parse_graph(text)
    assert graph.num_vertices == 3
    assert graph.weight(1, 2) == pytest.approx(0.8 * math.pi)
    assert parse_graph(graph.to_text()).edges == graph.edges


@pytest.mark.parametrize(
    "text, line_no, reason",
    [
        ("edge 1 2 pi", 1, "expected 'vertices <N>'"),
        ("vertices 3\nedge 1 2", 2, "expected 'edge <a> <b> <weight>'"),
        ("vertices 3\nedge 1 5 pi", 2, "out of range"),
        ("vertices 3\nedge 1 2 pi\nedge 2 1 pi", 3, "Duplicate"),
        ("vertices 3\nnode 1", 2, "unknown keyword"),
        ("vertices 3\nedge 1 2 fast", 2, "Not an angle"),
        ("vertices three", 1, "not an integer"),
        ("# nothing here\n", 1, "empty graph file"),
    ],
)
def test_parse_graph_errors(text, line_no, reason):
    with pytest.raises(GraphParseError) as err:
        parse_graph(text)
    assert err.value.line_no == line_no
    assert reason in err.value.reason
    assert str(err.value).startswith(f"line {line_no}:")


def test_load_graph(tmp_path):
    path = tmp_path / "chain.txt"
    path.write_text("vertices 2\nedge 1 2 0.5pi\n", encoding="utf-8")
    assert load_graph(path).weight(1, 2) == pytest.approx(0.5 * math.pi)


# ── State construction ───────────────────────────────────────

def test_build_state_matches_gate_by_gate_construction():
    graph = path_graph([0.3, -1.1, 2.0])
    direct = plus_state(4)
    for e in graph.edges:
        direct = apply_controlled_phase(direct, e.a, e.b, e.weight)
    assert np.allclose(build_state(graph).amplitudes, direct.amplitudes, atol=1e-14)


def test_edge_order_does_not_matter():
    rng = np.random.default_rng(7)
    edges = [(a, b, float(rng.uniform(-math.pi, math.pi))) for a in range(1, 6) for b in range(a + 1, 6)]
    reference = build_state(WeightedGraph(5, edges)).amplitudes
    shuffler = random.Random(11)
    for _ in range(5):
        shuffled = list(edges)
        shuffler.shuffle(shuffled)
        amplitudes = build_state(WeightedGraph(5, shuffled)).amplitudes
        assert np.max(np.abs(amplitudes - reference)) < 1e-14


def cluster_stabilizer_expectation(state, site):
    """<K_i> with K_i = X on site i, Z on each chain neighbour."""
    out = apply_single_qubit_gate(state, site, X)
    for neighbour in (site - 1, site + 1):
        if 1 <= neighbour <= state.num_qubits:
            out = apply_single_qubit_gate(out, neighbour, Z)
    return np.vdot(state.amplitudes, out.amplitudes)


@pytest.mark.parametrize("n", [1, 2])
def test_pi_chain_is_cluster_state(n):
    state = build_uniform_chain(ChainSpec(n, math.pi))
    for site in range(1, state.num_qubits + 1):
        assert cluster_stabilizer_expectation(state, site) == pytest.approx(1.0, abs=1e-12)


def test_weaker_chain_is_not_stabilized():
    state = build_uniform_chain(ChainSpec(1, 0.8 * math.pi))
    assert abs(cluster_stabilizer_expectation(state, 2)) < 1 - 1e-3


def test_star_graph_is_lu_equivalent_to_ghz():
    for k in range(2, 6):
        state = build_state(star_graph(k))
        for leaf in range(2, k + 1):
            state = apply_single_qubit_gate(state, leaf, H)
        assert fidelity_with_pure(state, ghz_state(k)) == pytest.approx(1.0, abs=1e-12)


def test_noiseless_density_matches_pure_state():
    graph = path_graph([0.8 * math.pi, 0.6 * math.pi])
    rho = build_noisy_state(graph, NoiseSpec.noiseless())
    assert isinstance(rho, DensityMatrix)
    assert np.allclose(rho.elements, build_state(graph).to_density().elements, atol=1e-15)


def test_noisy_state_is_mixed():
    rho = build_noisy_state(path_graph([math.pi]), NoiseSpec(NoiseKind.DEPOLARIZING, 0.1))
    assert rho.purity() < 1 - 1e-3


def test_per_qubit_noise_sequence():
    graph = path_graph([math.pi])
    clean, noisy = NoiseSpec.noiseless(), NoiseSpec(NoiseKind.DEPHASING, 0.2)
    mixed = build_noisy_state(graph, [clean, noisy])
    uniform = build_noisy_state(graph, noisy)
    assert mixed.purity() > uniform.purity()
    with pytest.raises(ValueError, match="per-qubit"):
        build_noisy_state(graph, [clean])


def test_plus_state_is_normalized():
    psi = plus_state(5)
    assert isinstance(psi, PureState)
    assert np.vdot(psi.amplitudes, psi.amplitudes).real == pytest.approx(1.0, abs=1e-14)

import dataclasses

import numpy as np
import pytest

from src.spectral.geometries import build_circle
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.types.hermitian_matrix import HermitianMatrix
from src.types.metric_graph import MetricGraph, load_graph, save_graph
from src.types.sdp import SdpProblem
from src.types.stress_problem import StressProblem
from src.types.truncated_triple import load_triple, save_triple, state_expectation
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError
from src.util.json_util import read_json


class TestTruncatedTriple:
    def test_save_and_load(self, tmp_path):
        t = build_circle(2)
        path = tmp_path / "circle.json"
        save_triple(t, path, {"build": {"convention": "strict"}})
        loaded = load_triple(path)
        assert loaded == t
        assert read_json(path)["geometry"] == "CIRCLE"

    def test_inconsistent_labels(self):
        t = build_circle(2)
        with pytest.raises(ForgeError) as e:
            dataclasses.replace(t, basis_labels=t.basis_labels[:-1])
        assert e.value.code == Err.INCONSISTENT_TRIPLE

    def test_eigenvalue_bound(self):
        t = build_circle(2)
        with pytest.raises(ForgeError) as e:
            dataclasses.replace(t, dirac_eigenvalues=[3.0] + t.dirac_eigenvalues[1:])
        assert e.value.code == Err.INCONSISTENT_TRIPLE

    def test_dimension_mismatch(self):
        t = build_circle(2)
        with pytest.raises(ForgeError) as e:
            dataclasses.replace(t, phi=[HermitianMatrix.identity(3), t.phi[1]])
        assert e.value.code == Err.DIMENSION_MISMATCH

    def test_state_expectation(self):
        t = build_circle(1)
        v = VectorState.from_vector(np.array([0, 1, 0]))
        assert state_expectation(t, v, HermitianMatrix.identity(3)) == 1.0
        assert state_expectation(t, v, t.phi[0]) == 0.0

    def test_flags(self):
        assert Geometry.from_flag("sphere-dc") == Geometry.SPHERE_DC
        assert CutoffConvention.from_flag("paper") == CutoffConvention.PAPER_S2
        with pytest.raises(ForgeError) as e:
            Geometry.from_flag("torus")
        assert e.value.code == Err.UNKNOWN_GEOMETRY


class TestMetricGraph:
    def test_save_and_load(self, tmp_path):
        states = [VectorState.from_vector(np.array([1, 0])), VectorState.from_vector(np.array([0, 1]))]
        graph = MetricGraph("g", states, [[1.0, 0.0], [-1.0, 0.0]], [0.0, 0.0], [[0.0, 2.0], [2.0, 0.0]])
        path = tmp_path / "graph.json"
        save_graph(graph, path, {"threads": 1}, {"metric_violations": []})
        assert load_graph(path) == graph
        assert graph.distance_array()[0, 1] == 2.0

    def test_asymmetric(self):
        states = [VectorState.from_vector(np.array([1, 0]))] * 2
        with pytest.raises(ForgeError) as e:
            MetricGraph("g", states, [[1.0], [1.0]], [0.0, 0.0], [[0.0, 1.0], [1.5, 0.0]])
        assert e.value.code == Err.INCONSISTENT_TRIPLE

    def test_negative_distance(self):
        states = [VectorState.from_vector(np.array([1, 0]))] * 2
        with pytest.raises(ForgeError) as e:
            MetricGraph("g", states, [[1.0], [1.0]], [0.0, 0.0], [[0.0, -1.0], [-1.0, 0.0]])
        assert e.value.code == Err.NEGATIVE_DISTANCE


class TestProblems:
    def test_sdp_problem_checks_anti_hermitian(self):
        k = np.array([[[0, 1], [-1, 0]]], dtype=complex)
        assert SdpProblem(np.array([1.0]), k).dim == 2
        with pytest.raises(ForgeError) as e:
            SdpProblem(np.array([1.0]), np.array([[[0, 1], [1, 0]]], dtype=complex))
        assert e.value.code == Err.NOT_HERMITIAN
        with pytest.raises(ForgeError) as e:
            SdpProblem(np.array([1.0, 2.0]), k)
        assert e.value.code == Err.DIMENSION_MISMATCH

    def test_stress_problem(self):
        d = np.array([[0.0, 1.0], [1.0, 0.0]])
        w = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert StressProblem(d, w, 2).size == 2
        with pytest.raises(ForgeError) as e:
            StressProblem(-d, w, 2)
        assert e.value.code == Err.NEGATIVE_DISTANCE
        with pytest.raises(ForgeError) as e:
            StressProblem(d, np.zeros((2, 2)), 2)
        assert e.value.code == Err.DISCONNECTED_WEIGHTS
        with pytest.raises(ForgeError) as e:
            StressProblem(d, w + np.eye(2), 2)
        assert e.value.code == Err.INVALID_ARGUMENT

import copy

import numpy as np
import pytest

from src.types.half_integer import HalfInteger
from src.types.hermitian_matrix import HermitianMatrix
from src.types.vector_state import VectorState
from src.util.errors import Err, ForgeError


class TestHermitianMatrix:
    def test_construction(self):
        m = HermitianMatrix([[1, 2 - 1j], [2 + 1j, -3]])
        assert m.dim == 2
        assert m == HermitianMatrix(np.array([[1, 2 - 1j], [2 + 1j, -3]]))
        assert hash(m) == hash(HermitianMatrix([[1, 2 - 1j], [2 + 1j, -3]]))
        assert copy.deepcopy(m) is m

    def test_read_only(self):
        m = HermitianMatrix.identity(3)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 2

    def test_not_hermitian(self):
        with pytest.raises(ForgeError) as e:
            HermitianMatrix([[1, 1j], [1j, 1]])
        assert e.value.code == Err.NOT_HERMITIAN

    def test_not_square(self):
        with pytest.raises(ForgeError) as e:
            HermitianMatrix(np.zeros((2, 3)))
        assert e.value.code == Err.DIMENSION_MISMATCH

    def test_expectation(self):
        m = HermitianMatrix([[1, 0], [0, -1]])
        v = np.array([1, 1j]) / np.sqrt(2)
        assert abs(m.expectation(v)) < 1e-15
        with pytest.raises(ForgeError):
            m.expectation(np.ones(3))

    def test_json_is_exact(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        m = HermitianMatrix(a + a.conj().T)
        assert HermitianMatrix.from_json(m.to_json()) == m

    def test_malformed_json(self):
        with pytest.raises(ForgeError) as e:
            HermitianMatrix.from_json([[1.0, 2.0]])
        assert e.value.code == Err.MALFORMED_FILE


class TestVectorState:
    def test_normalization(self):
        v = VectorState.from_vector(np.array([1.0, 1.0, 1j, -1j]))
        assert abs(np.linalg.norm(v.vector) - 1) < 1e-15
        assert v.dim == 4

    def test_not_normalized(self):
        with pytest.raises(ForgeError) as e:
            VectorState([1.0 + 0j, 1.0 + 0j])
        assert e.value.code == Err.NOT_NORMALIZED
        with pytest.raises(ForgeError):
            VectorState.from_vector(np.zeros(3))


class TestHalfInteger:
    def test_arithmetic(self):
        half = HalfInteger.of(0.5)
        assert half.twice_value == 1
        assert not half.is_integer
        assert half + half == 1
        assert (half + half).is_integer
        assert HalfInteger.of(2) - half == 1.5
        assert -half == HalfInteger(-1)
        assert abs(HalfInteger(-3)) == HalfInteger(3)
        assert HalfInteger(1) < HalfInteger(2) <= HalfInteger(2)
        assert repr(HalfInteger(3)) == "3/2"
        assert repr(HalfInteger(4)) == "2"
        assert hash(HalfInteger(4)) == hash(HalfInteger.of(2))

    def test_invalid(self):
        with pytest.raises(ForgeError) as e:
            HalfInteger.of(0.25)
        assert e.value.code == Err.INVALID_LABELS
        with pytest.raises(ForgeError):
            HalfInteger(1.5)  # type: ignore

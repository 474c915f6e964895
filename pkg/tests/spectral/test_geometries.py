import math

import numpy as np
import pytest

from src.spectral.geometries import (
    bott_projection,
    build_circle,
    build_dc_perturbation,
    build_sphere,
    build_triple,
    eigenspinor_values,
    sphere_basis_labels,
    sphere_shell_count,
    weyl_estimate,
)
from src.types.cutoff_convention import CutoffConvention, Geometry
from src.util.errors import Err, ForgeError


@pytest.fixture(scope="module")
def sphere_one():
    return build_sphere(1.0)


@pytest.fixture(scope="module")
def sphere_two():
    return build_sphere(2.0)


def sphere_grid(n_theta: int = 20, n_phi: int = 24):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(x)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    weights = np.outer(w, np.full(n_phi, 2 * math.pi / n_phi))
    return tt.ravel(), pp.ravel(), weights.ravel()


class TestCircle:
    def test_dimensions(self):
        for cutoff in range(1, 9):
            t = build_circle(cutoff)
            assert t.dim == 2 * cutoff + 1
            assert len(t.algebra_basis) == 4 * cutoff + 1
            assert t.dirac_eigenvalues == [float(n) for n in range(-cutoff, cutoff + 1)]
        assert build_circle(2.5).dim == 5
        assert build_circle(2.5).name == "circle-2.5"

    def test_coordinates(self):
        t = build_circle(3)
        x, y = t.phi_stack()
        assert np.allclose(x, x.conj().T)
        assert np.allclose(y, y.conj().T)
        # neighbours only: <e_{n+1}, cos e_n> = 1/2
        assert x[1, 0] == pytest.approx(0.5)
        assert x[2, 0] == 0
        assert np.allclose(t.phi_sq_stack().sum(axis=0), np.eye(t.dim))
        assert t.embedding_dim == 2
        assert t.spectral_dim_hint == 1

    def test_invalid_cutoff(self):
        for cutoff in (0.5, 0.0, -3.0, math.nan, math.inf):
            with pytest.raises(ForgeError) as e:
                build_circle(cutoff)
            assert e.value.code == Err.INVALID_CUTOFF


class TestSphere:
    def test_shell_counts(self):
        assert sphere_shell_count(5, CutoffConvention.PAPER_S2) == 6
        assert sphere_shell_count(5, CutoffConvention.STRICT_ABS) == 5
        assert sphere_shell_count(5.9, CutoffConvention.STRICT_ABS) == 5
        labels = sphere_basis_labels(6)
        assert len(labels) == 84
        assert len(sphere_basis_labels(5)) == 60
        assert labels[0] == (-1, 11, -11)
        assert labels[-1] == (1, 11, 11)

    def test_eigenvalues(self, sphere_two):
        t = sphere_two
        assert t.dim == 4 * (1 + 2 + 3)
        eigenvalues = np.array(t.dirac_eigenvalues)
        assert np.all(np.diff(eigenvalues) >= 0)
        for k in (1, 2, 3):
            assert np.count_nonzero(eigenvalues == k) == 2 * k
            assert np.count_nonzero(eigenvalues == -k) == 2 * k
        assert t.eigenvalue_bound == 3.0
        assert t.name == "sphere-2-paper"

    def test_strict_convention(self):
        t = build_sphere(2.0, CutoffConvention.STRICT_ABS)
        assert t.dim == 12
        assert max(abs(x) for x in t.dirac_eigenvalues) == 2.0

    def test_algebra_degree(self, sphere_two):
        assert len(sphere_two.algebra_basis) == 25
        assert len(build_sphere(2.0, algebra_degree=1).algebra_basis) == 4
        with pytest.raises(ForgeError):
            build_sphere(2.0, algebra_degree=-1)

    def test_identity_in_algebra(self, sphere_two):
        one = math.sqrt(4 * math.pi) * sphere_two.algebra_basis[0].entries
        assert np.allclose(one, np.eye(sphere_two.dim), atol=1e-12)
        assert np.allclose(sphere_two.phi_sq_stack().sum(axis=0), np.eye(sphere_two.dim), atol=1e-12)

    def test_eigenspinors_orthonormal(self, sphere_one):
        theta, phi, w = sphere_grid()
        values = eigenspinor_values(sphere_one, theta, phi)
        assert values.shape == (sphere_one.dim, 2, len(theta))
        gram = np.einsum("akp,bkp,p->ab", values.conj(), values, w)
        assert np.max(np.abs(gram - np.eye(sphere_one.dim))) < 1e-12

    def test_coordinates_match_quadrature(self, sphere_one):
        theta, phi, w = sphere_grid()
        values = eigenspinor_values(sphere_one, theta, phi)
        functions = [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
        for f, m in zip(functions, sphere_one.phi):
            quadrature = np.einsum("akp,bkp,p->ab", values.conj(), values, w * f)
            assert np.max(np.abs(quadrature - m.entries)) < 1e-12

    def test_coordinates_commute_in_the_limit(self):
        norms = []
        for cutoff in range(3, 9):
            phi = build_sphere(float(cutoff), algebra_degree=1).phi_stack()
            worst = 0.0
            for i in range(3):
                for j in range(i + 1, 3):
                    commutator = phi[i] @ phi[j] - phi[j] @ phi[i]
                    worst = max(worst, float(np.linalg.norm(commutator, 2)))
            norms.append(worst)
        assert norms[0] > 0
        assert all(b < a for a, b in zip(norms, norms[1:]))

    def test_acceptance_sizes(self):
        t = build_sphere(5.0)
        assert t.dim == 84
        assert len(t.algebra_basis) == 121
        assert build_sphere(5.0, CutoffConvention.STRICT_ABS, algebra_degree=2).dim == 60


class TestDiracPerturbation:
    def test_zero_coupling(self, sphere_two):
        assert build_dc_perturbation(sphere_two, 0.0) is sphere_two

    def test_eigenvalues(self, sphere_two):
        t = build_dc_perturbation(sphere_two, 0.5)
        assert t.geometry == Geometry.SPHERE_DC
        assert t.name == "sphere-2-paper-dc0.5"
        shifted = {old: new for old, new in zip(sphere_two.dirac_eigenvalues, t.dirac_eigenvalues)}
        assert shifted[1.0] == 0.5
        assert shifted[-1.0] == -0.5
        assert shifted[2.0] == 2.5
        assert shifted[-2.0] == -2.5
        assert shifted[3.0] == 2.5
        assert t.eigenvalue_bound == 3.5
        assert t.phi == sphere_two.phi
        assert t.algebra_basis == sphere_two.algebra_basis

    def test_only_sphere(self):
        with pytest.raises(ForgeError) as e:
            build_dc_perturbation(build_circle(2), 0.5)
        assert e.value.code == Err.INVALID_ARGUMENT

    def test_build_triple(self):
        assert build_triple(Geometry.CIRCLE, 3, CutoffConvention.PAPER_S2).dim == 7
        t = build_triple(Geometry.SPHERE_DC, 1.0, c=0.5, algebra_degree=1)
        assert t.geometry == Geometry.SPHERE_DC
        assert build_triple(Geometry.SPHERE, 1.0).geometry == Geometry.SPHERE


class TestWeylEstimate:
    def test_sphere(self):
        eigenvalues = [sign * (tj + 1) / 2 for sign, tj, _ in sphere_basis_labels(11)]
        slope, volume = weyl_estimate(eigenvalues, 2)
        assert round(slope) == 2
        assert 1.5 < slope < 2.2
        assert abs(volume - 4 * math.pi) < 0.2 * 4 * math.pi

    def test_circle(self):
        slope, volume = weyl_estimate(build_circle(10).dirac_eigenvalues, 1)
        assert round(slope) == 1
        assert abs(volume - 2 * math.pi) < 0.1 * 2 * math.pi

    def test_too_few_shells(self):
        with pytest.raises(ForgeError) as e:
            weyl_estimate(build_circle(2).dirac_eigenvalues, 1)
        assert e.value.code == Err.TOO_FEW_SHELLS
        with pytest.raises(ForgeError):
            weyl_estimate([1.0, 2.0, 3.0], 0)


class TestBottProjection:
    def test_shape_and_trace(self, sphere_one):
        p = bott_projection(sphere_one)
        assert p.dim == 2 * sphere_one.dim
        assert np.trace(p.entries).real == pytest.approx(sphere_one.dim)
        assert np.allclose(p.entries, p.entries.conj().T)

    def test_circle(self):
        with pytest.raises(ForgeError):
            bott_projection(build_circle(2))

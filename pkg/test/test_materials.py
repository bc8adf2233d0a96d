#!/usr/bin/env python3

import sys, os
sys.path.insert(0, os.path.dirname(__file__))

import math
import unittest

from testutil import *

class TestModel(TestCaseLocal):
    def test_presets(self):
        self.assertEqual((GOLD.omega0, GOLD.omega_p, GOLD.gamma), (0.0, 8.45, 0.047))
        self.assertEqual((DIELECTRIC.omega0, DIELECTRIC.omega_p, DIELECTRIC.gamma), (5.0, 8.0, 0.5))
        self.assertIs(MaterialModel.fromPreset("gold"), GOLD)
        with self.assertRaises(ConfigError) as ctx:
            MaterialModel.fromPreset("silver")
        self.assertEqual(ctx.exception.field, "material")

    def test_validation(self):
        with self.assertRaises(ConfigError) as ctx:
            MaterialModel(omega0=5.0, omega_p=8.0, gamma=0.0)
        self.assertEqual(ctx.exception.field, "material.gamma")
        with self.assertRaises(ConfigError) as ctx:
            MaterialModel(0.0, 8.0, 0.1, mu_model=Oscillator(4.0, 4.0, -1.0))
        self.assertEqual(ctx.exception.field, "mu.gamma")
        with self.assertRaises(ConfigError):
            MaterialModel(omega0=-1.0, omega_p=8.0, gamma=0.5)

    def test_as_dict(self):
        self.assertDictEqual(DIELECTRIC.asDict(),
                             {"name": "dielectric", "omega0": 5.0, "omega_p": 8.0, "gamma": 0.5})
        self.assertDictEqual(NEGATIVE_INDEX.asDict()["mu"],
                             {"omega0": 4.0, "omega_p": 4.0, "gamma": 0.1})
        self.assertEqual(GOLD.short_repr(), "gold: omega0=0 omega_p=8.45 gamma=0.047")

class TestResponse(TestCaseLocal):
    def test_permittivity(self):
        # eps = 1 - W^2 / (w^2 - w0^2 + i g w)
        self.assertRelClose(permittivity(GOLD, 2.0), 1 - 8.45**2 / (4.0 + 0.094j), 1e-15)
        self.assertRelClose(permittivity(DIELECTRIC, 6.0), 1 - 64.0 / (11.0 + 3.0j), 1e-15)
        self.assertEqual(permittivity(VACUUM, 3.0), 1.0)
        self.assertEqual(permeability(GOLD, 3.0), 1.0)

    def test_arrays(self):
        omega = np.linspace(0.1, 20.0, 50)
        eps = permittivity(GOLD, omega)
        self.assertEqual(eps.shape, omega.shape)
        self.assertRelClose(eps[7], permittivity(GOLD, float(omega[7])), 1e-15)
        s = response_sample(DIELECTRIC, omega)
        self.assertEqual(np.shape(s.mu), omega.shape)
        self.assertRelClose(s.n[11], response_sample(DIELECTRIC, float(omega[11])).n, 1e-15)

    def test_domain(self):
        for model in MODELS:
            for omega in (0.0, -1.0):
                with self.assertRaises(DomainError):
                    permittivity(model, omega)
                with self.assertRaises(DomainError):
                    response_sample(model, omega)
        with self.assertRaises(DomainError):
            response_sample(GOLD, np.array([1.0, 0.0]))

    def test_branch(self):
        self.assertEqual(refractive_index(4.0 + 0j, 1.0 + 0j), 2.0)
        self.assertEqual(refractive_index(-1.0 + 0j, 1.0 + 0j), 1j)
        # Real product: the principal root is kept even with a tiny negative imaginary part.
        self.assertGreater(refractive_index(4.0 - 1e-17j, 1.0 + 0j).real, 0)
        with self.assertRaises(SingularResponseError):
            refractive_index(0j, 1.0 + 0j)
        omega = np.geomspace(1e-3, 1e3, 500)
        for model in (*MODELS, NEGATIVE_INDEX):
            n = response_sample(model, omega).n
            self.assertTrue(np.all(n.imag >= 0), model.name)
            self.assertRelClose(n * n, permittivity(model, omega) * permeability(model, omega), 1e-12)

    def test_negative_index(self):
        n = response_sample(NEGATIVE_INDEX, 5.0).n
        self.assertLess(n.real, 0)
        self.assertGreater(n.imag, 0)
        self.assertGreater(response_sample(NEGATIVE_INDEX, 12.0).n.real, 0)

    def test_dispersion_factors(self):
        s = response_sample(VACUUM, np.array([0.5, 3.0]))
        self.assertRelClose(s.d_omega_n, [1.0, 1.0], 1e-15)
        self.assertRelClose(s.d_omega_mu, [1.0, 1.0], 1e-15)
        self.assertEqual(float(np.max(np.abs(s.d_n_over_mu))), 0.0)

    def test_derivatives(self):
        for model in MODELS:
            off, near = derivative_bands(model, np.linspace(0.05, 20.0, 400))
            self.assertGreater(off.size, 100)
            self.assertLess(float(np.max(derivative_deviation(model, off))), 1e-6, model.name)
            # Every grid point lands in one of the two bands.
            self.assertEqual(off.size + near.size, 400)
            self.assertTrue(np.any(np.abs(near - math.hypot(model.omega0, model.omega_p)) < 0.05))
            self.assertLess(float(np.max(derivative_deviation(model, near))), 1e-4, model.name)
        self.assertLess(float(np.max(derivative_deviation(NEGATIVE_INDEX, [1.0, 2.0, 7.0, 12.0]))), 1e-6)

class TestKramersKronig(TestCaseLocal):
    grid = (0.5, 2.0, 6.0, 9.0, 15.0)

    def test_transform(self):
        for model in MODELS:
            for omega in (0.7, 5.0, 11.0):
                res = kramers_kronig_transform(model, omega, 1e3)
                self.assertAlmostEqual(res.value, float(np.real(permittivity(model, omega))) - 1,
                                       delta=1e-4)
        with self.assertRaises(DomainError):
            kramers_kronig_transform(GOLD, 1e3, 1e3)

    def test_residual(self):
        for model in MODELS:
            self.assertLess(kramers_kronig_residual(model, self.grid, 1e3), 1e-3, model.name)

    def test_cutoff_convergence(self):
        # The truncated tail falls off as cutoff^-3.
        cutoffs = (30.0, 1e2, 3e2, 1e3, 3e3, 1e4)
        residuals = [kramers_kronig_residual(DIELECTRIC, self.grid, c, tol=1e-12) for c in cutoffs]
        for c, coarse, fine in zip(cutoffs[1:], residuals, residuals[1:]):
            self.assertLess(fine, coarse, f"cutoff {c:g}: {residuals}")
        self.assertLess(residuals[-1], 1e-10)
        self.assertEqual(kramers_kronig_residual(DIELECTRIC, [], 1e3), 0.0)
        with self.assertRaises(DomainError):
            kramers_kronig_residual(DIELECTRIC, [2.0, 1.0], 1e3)

if __name__ == '__main__':
    unittest.main()

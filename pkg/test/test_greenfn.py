#!/usr/bin/env python3

import sys, os
sys.path.insert(0, os.path.dirname(__file__))

import math
import unittest
from unittest import mock

from testutil import *
from blockzpe import greenfn

def sample(model, omega):
    return response_sample(model, omega)

class TestGeometry(TestCaseLocal):
    def test_region(self):
        geom = BlockGeometry(5.0)
        self.assertEqual([geom.region(x) for x in (-1.0, 0.0, 2.5, 5.0, 5.1)],
                         [Region.LEFT, Region.INSIDE, Region.INSIDE, Region.INSIDE, Region.RIGHT])
        self.assertListEqual(list(geom.regions([-1.0, 1.0, 6.0])),
                             [Region.LEFT, Region.INSIDE, Region.RIGHT])
        with self.assertRaises(DomainError):
            BlockGeometry(0.0)
        with self.assertRaises(RegionError):
            green_right(sample(GOLD, 2.0), 5.0, 4.0, 6.0)
        with self.assertRaises(RegionError):
            green_inside(sample(GOLD, 2.0), 5.0, 1.0, 5.5)
        with self.assertRaises(RegionError):
            green_left(sample(GOLD, 2.0), 5.0, -1.0, 0.5)
        with self.assertRaises(RegionError):
            green_closed(GOLD, 5.0, 2.0, -1.0, 6.0)

class TestScattering(TestCaseLocal):
    def test_matched(self):
        # eps = mu: no reflection
        matched = MaterialModel(1.0, 2.0, 0.3, mu_model=Oscillator(1.0, 2.0, 0.3))
        for omega in (0.5, 1.5, 4.0):
            s = sample(matched, omega)
            self.assertEqual(abs(zeta(s, 3.0)), 0.0)
            alpha, beta = alpha_beta(s, 3.0)
            self.assertLess(abs(alpha), 1e-25)
            self.assertEqual(abs(beta), 0.0)

    def test_limits(self):
        s = sample(GOLD, 2.0)
        self.assertLess(abs(zeta(s, 1e-12)), 1e-9)
        # Thick absorbing block: E -> 0
        alpha, beta = alpha_beta(s, 1e3)
        self.assertEqual(abs(alpha), 0.0)
        self.assertRelClose(beta, (s.epsilon - s.mu) / (2 * s.n + s.epsilon + s.mu), 1e-14)

    def test_coefficients(self):
        c = scatter_coefficients(sample(DIELECTRIC, 7.0), L_1UM)
        self.assertRelClose(c.zeta, c.abs_zeta * np.exp(1j * c.phi_zeta), 1e-14)
        self.assertGreaterEqual(c.abs_zeta, 0.0)

    def test_zeta_below_one(self):
        omega = np.geomspace(1e-3, 1e3, 600)
        for model in MODELS:
            s = sample(model, omega)
            for L in np.geomspace(1e-2, 1e3, 12):
                self.assertLess(float(np.max(np.abs(zeta(s, L)))), 1.0, f"{model.name} L={L:g}")

    def test_naive_forms(self):
        omega = np.linspace(0.5, 15.0, 80)
        for model in MODELS:
            s = sample(model, omega)
            with np.errstate(all="ignore"):
                zc, an = zeta_cot(s, L_1UM), alpha_naive(s, L_1UM)
            ok = np.abs(np.exp(-2j * s.n * omega * L_1UM)) < 1e8
            self.assertGreater(int(np.count_nonzero(ok)), 20)
            self.assertRelClose(zeta(s, L_1UM)[ok], zc[ok], 1e-10)
            self.assertRelClose(alpha_beta(s, L_1UM)[0][ok], an[ok], 1e-10)

    def test_thick_block_stays_finite(self):
        s = sample(GOLD, np.linspace(0.5, 10.0, 50))
        self.assertTrue(np.all(np.isfinite(zeta(s, 1e4))))
        with np.errstate(all="ignore"):
            self.assertTrue(np.any(np.isinf(np.exp(-2j * s.n * s.omega * 1e4))))

    def test_vanishing_denominator(self):
        # n = 0 gives E = 1, where every denominator vanishes.
        s = ResponseSample(omega=1.0, epsilon=0j, mu=1 + 0j, n=0j, d_omega_n=0j,
                           d_n_over_mu=0j, d_omega_eps=0j, d_omega_mu=0j)
        with self.assertRaises(DegenerateGeometryError):
            zeta(s, 2.0)
        with self.assertRaises(DegenerateGeometryError):
            alpha_beta(s, 2.0)

class TestClosedForms(TestCaseLocal):
    def test_free_space(self):
        s = sample(VACUUM, 3.0)
        self.assertRelClose(green_right(s, 2.0, 4.0, 4.0), -1j / 6.0, 1e-15)
        self.assertRelClose(green_inside(s, 2.0, 0.5, 1.5), -1j / 6.0 * np.exp(3j), 1e-14)
        self.assertRelClose(green_numeric(VACUUM, 2.0, 3.0, -1.0, 5.0), -1j / 6.0 * np.exp(18j), 1e-12)

    def test_reciprocity(self):
        gen = rng(7)
        for model in MODELS:
            for region, (lo, hi) in ((Region.LEFT, (-8.0, -0.01)), (Region.INSIDE, (0.01, 5.0)),
                                     (Region.RIGHT, (5.1, 13.0))):
                for omega, x, xp in zip(gen.uniform(0.5, 15, 30), gen.uniform(lo, hi, 30),
                                        gen.uniform(lo, hi, 30)):
                    g = green_closed(model, L_1UM, omega, x, xp)
                    self.assertEqual(geom_region(x), region)
                    self.assertRelClose(g.value, green_closed(model, L_1UM, omega, xp, x).value, 1e-10)

    def test_known_values(self):
        self.assertRelClose(green_closed(GOLD, L_1UM, 2.0, 6.0, 6.0).value,
                            green_numeric(GOLD, L_1UM, 2.0, 6.0, 6.0), 1e-8)
        self.assertRelClose(green_closed(DIELECTRIC, L_1UM, 6.0, 1.0, 3.0).value,
                            green_numeric(DIELECTRIC, L_1UM, 6.0, 1.0, 3.0), 1e-8)

    def test_numeric_oracle(self):
        gen = rng(11)
        for model in MODELS:
            for lo, hi in ((-10.0, -1e-3), (1e-3, L_1UM - 1e-3), (L_1UM + 1e-3, 15.0)):
                omegas = gen.uniform(0.5, 15.0, 1000)
                xs, xps = gen.uniform(lo, hi, 1000), gen.uniform(lo, hi, 1000)
                for omega in (1.0, 5.0, 12.0):
                    closed = [green_closed(model, L_1UM, omega, x, xp).value for x, xp in zip(xs, xps)]
                    self.assertRelClose(closed, green_numeric(model, L_1UM, omega, xs, xps), 1e-8)
                for omega, x, xp in zip(omegas, xs, xps):
                    self.assertRelClose(green_closed(model, L_1UM, omega, x, xp).value,
                                        green_numeric(model, L_1UM, omega, x, xp), 1e-8)

    def test_cross_region_numeric(self):
        # Continuity of g across the interface at x = L.
        g_in = green_numeric(DIELECTRIC, L_1UM, 6.0, L_1UM - 1e-9, 1.0)
        g_out = green_numeric(DIELECTRIC, L_1UM, 6.0, L_1UM + 1e-9, 1.0)
        self.assertRelClose(g_in, g_out, 1e-7)

    def test_thick_block_numeric(self):
        # exp(Im(n) w L) is far beyond the float range here.
        L = 200.0
        for x, xp in ((1.0, 3.0), (199.0, 199.5), (201.0, 203.0), (-3.0, -1.0), (-1.0, 201.0)):
            numeric = green_numeric(GOLD, L, 2.0, x, xp)
            self.assertTrue(np.isfinite(numeric), (x, xp))
            if BlockGeometry(L).region(x) == BlockGeometry(L).region(xp):
                self.assertRelClose(numeric, green_closed(GOLD, L, 2.0, x, xp).value, 1e-8)
        self.assertAlmostEqual(abs(green_numeric(GOLD, L, 2.0, -1.0, 201.0)), 0.0, delta=1e-300)

    def test_vanishing_wronskian(self):
        with mock.patch.object(greenfn, "_TINY_WRONSKIAN", math.inf), \
                self.assertRaises(ResonanceDegeneracyError):
            green_numeric(DIELECTRIC, L_1UM, 6.0, 1.0, 3.0)

    def test_wronskian(self):
        for model in MODELS:
            for omega in (1.0, 5.0, 12.0):
                wr = wronskian(model, L_1UM, omega, np.linspace(-L_1UM, 2 * L_1UM, 31))
                self.assertRelClose(wr, np.full_like(wr, wr[0]), 1e-10)
        self.assertRelClose(wronskian(VACUUM, 1.0, 2.0, np.array([0.3])), [4j * np.exp(-2j)], 1e-14)

def geom_region(x):
    return BlockGeometry(L_1UM).region(x)

class TestResidual(TestCaseLocal):
    def test_free_space_convergence(self):
        ratio = residual_convergence(VACUUM, 2.0, 3.0, 0.5, 3.0, 9.0, 0.02)
        self.assertTrue(3.0 <= ratio <= 5.0, ratio)

    def test_inside_convergence(self):
        for model in MODELS:
            ratio = residual_convergence(model, L_1UM, 5.0, 4.5, 0.2, 4.0, 0.01)
            self.assertTrue(3.0 <= ratio <= 5.0, f"{model.name}: {ratio}")

    def test_residual_small(self):
        xs = np.arange(0.1, 4.0, 0.005)
        samples = sample_green(DIELECTRIC, L_1UM, 6.0, xs, 4.5)
        self.assertLess(residual_check(samples, DIELECTRIC, L_1UM, 6.0), 1e-2)
        self.assertEqual(len(samples), xs.size)

    def test_coarse_warning(self):
        with LogToStringScope() as log:
            old = workspace.logLevel
            setLogLevel(LogLevel.WARNING)
            try:
                residual_convergence(GOLD, L_1UM, 2.0, 4.5, 0.2, 4.0, 1.0)
            finally:
                setLogLevel(old)
        self.assertIn("{residual_coarse}", log.getvalue())

    def test_preconditions(self):
        samples = sample_green(GOLD, L_1UM, 2.0, [1.0, 1.1], 3.0)
        with self.assertRaises(ValueError):
            residual_check(samples, GOLD, L_1UM, 2.0)
        samples = sample_green(GOLD, L_1UM, 2.0, [2.9, 3.0, 3.1], 3.0)
        with self.assertRaises(ValueError):
            residual_check(samples, GOLD, L_1UM, 2.0)

if __name__ == '__main__':
    unittest.main()

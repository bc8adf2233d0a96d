#!/usr/bin/env python3

import sys, os
sys.path.insert(0, os.path.dirname(__file__))

import unittest

from testutil import *

def sign_changes(values: np.ndarray) -> int:
    s = np.sign(values)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))

class TestSpectra(TestCaseLocal):
    def W_and_free(self, model, L, omega):
        W, _, _ = spectral_energy(response_sample(model, omega), L)
        return W, free_spectral_energy(omega, L)

    def test_gold_below_plasma(self):
        omega = np.linspace(0.5, 7.0, 400)
        for L in (L_1UM, L_10UM):
            W, free = self.W_and_free(GOLD, L, omega)
            self.assertTrue(np.all(W < free), f"L={L}: first violation at "
                                              f"{omega[np.argmax(W >= free)] if np.any(W >= free) else None}")

    def test_gold_above_plasma(self):
        omega = np.linspace(8.46, 20.0, 2000)
        for L in (L_1UM, L_10UM):
            W, free = self.W_and_free(GOLD, L, omega)
            self.assertTrue(np.any(W > free), f"L={L}")

    def test_dielectric_damping_band(self):
        omega = np.linspace(5.5, 9.0, 400)
        for L in (L_1UM, L_10UM):
            W, free = self.W_and_free(DIELECTRIC, L, omega)
            self.assertTrue(np.all(W < free), f"L={L}")

    def test_casimir_sign_structure(self):
        for model in MODELS:
            omega = np.linspace(0.1, 20.0, 4000)
            changes = {}
            for L in (L_1UM, L_10UM):
                W_C = casimir_spectral_energy(response_sample(model, omega), L)
                self.assertTrue(np.any(W_C > 0) and np.any(W_C < 0), f"{model.name} L={L}")
                above = omega > model.omega_p
                changes[L] = sign_changes(W_C[above])
            self.assertGreater(changes[L_10UM], changes[L_1UM], model.name)

class TestTotalEnergy(TestCaseLocal):
    def test_positive(self):
        for model in MODELS:
            for length in lengths_from_str("0.1um,1um,10um"):
                res = integrate_spectrum(model, length.inv_eV())
                self.assertGreater(res.error_estimate, 0.0)
                self.assertGreater(res.value, abs(res.error_estimate), f"{model.name} L={length}")
                self.assertLessEqual(res.max_period_fraction, 0.5)

class TestVerifySuite(TestCaseLocal):
    def test_all_pass(self):
        with LogToStringScope():
            checks = run_checks()
        failed = [f"{c.name}: {c.deviation:.3e} >= {c.threshold:.0e} {c.detail}" for c in checks if not c.passed]
        self.assertListEqual(failed, [])
        names = " ".join(c.name for c in checks)
        for part in ("green closed vs numeric", "outside cancellation", "spatial integral",
                     "mode algebra", "dispersion derivatives", "Kramers-Kronig"):
            self.assertIn(part, names)

    def test_corrupt_alpha_fails(self):
        with LogToStringScope():
            checks = run_checks([GOLD], VerifyOptions(corrupt_alpha=True, mode_samples=100))
        failed = {c.name for c in checks if not c.passed}
        self.assertTrue(failed)
        self.assertTrue(all(name.startswith("spatial integral") for name in failed), failed)

if __name__ == '__main__':
    unittest.main()

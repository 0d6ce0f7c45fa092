"""Tests for sampler: exact draws, the Metropolis-Hastings chain, ensembles and their text form."""

import math
import os
import unittest
from collections import Counter

import numpy as np

from ipdsaw.errors import BudgetExceededError, DomainError, InvalidConfigurationError, RunConfigError
from ipdsaw.model import StretchConfig, count_configs, enumerate_configs, hamiltonian
from ipdsaw.sampler import (
    Ensemble,
    StretchChain,
    empirical_law,
    extension_law,
    gibbs_law,
    sample_ensemble,
    sample_exact,
    sample_mcmc,
    total_variation,
)
from ipdsaw.util import make_rng
from ipdsaw.walk import make_params

SLOW = bool(os.environ.get("IPDSAW_SLOW"))


class TestExtensionLaw(unittest.TestCase):
    def test_matches_enumeration(self) -> None:
        beta, n = 1.0, 7
        law = extension_law(n, make_params(beta))
        weights = np.zeros(n)
        for cfg in enumerate_configs(n):
            weights[cfg.extension - 1] += math.exp(beta * hamiltonian(cfg))
        np.testing.assert_allclose(law, weights / weights.sum(), atol=1e-12)
        self.assertAlmostEqual(float(law.sum()), 1.0, places=12)


class TestExactSampler(unittest.TestCase):
    def test_reproducible(self) -> None:
        a = sample_ensemble(20, 1.0, 50, seed=11)
        b = sample_ensemble(20, 1.0, 50, seed=11)
        self.assertEqual(a.configs, b.configs)
        c = sample_ensemble(20, 1.0, 50, seed=12)
        self.assertNotEqual(a.configs, c.configs)

    def test_configs_have_requested_length(self) -> None:
        params = make_params(2.0)
        rng = make_rng(5)
        for _ in range(200):
            self.assertEqual(sample_exact(30, params, rng).length, 30)

    def test_matches_gibbs_law(self) -> None:
        for beta in (1.0, 2.5):
            ens = sample_ensemble(5, beta, 50_000, seed=3)
            tv = total_variation(empirical_law(ens.configs), gibbs_law(5, beta))
            self.assertLess(tv, 0.025, msg=f"beta={beta}")

    def test_length_one(self) -> None:
        ens = sample_ensemble(1, 1.0, 5, seed=1)
        self.assertEqual([c.stretches for c in ens.configs], [(0,)] * 5)

    def test_guard(self) -> None:
        with self.assertRaises(BudgetExceededError):
            sample_exact(5000, make_params(1.0), make_rng(0))

    def test_mean_energy_grows_with_beta(self) -> None:
        means = []
        for beta in (0.5, 2.0, 4.0):
            ens = sample_ensemble(24, beta, 2000, seed=9)
            means.append(np.mean([hamiltonian(c) for c in ens.configs]))
        self.assertLess(means[0], means[1])
        self.assertLess(means[1], means[2])

    def test_workers_split_is_deterministic(self) -> None:
        a = sample_ensemble(8, 1.0, 11, seed=4, workers=2)
        b = sample_ensemble(8, 1.0, 11, seed=4, workers=2)
        self.assertEqual(len(a), 11)
        self.assertEqual(a.configs, b.configs)


class TestStretchChain(unittest.TestCase):
    def test_energy_bookkeeping(self) -> None:
        chain = StretchChain(15, make_params(1.5), make_rng(2))
        for _ in range(5000):
            chain.step()
            self.assertEqual(chain.energy, hamiltonian(chain.config()))
        self.assertGreater(chain.acceptance_rate, 0.0)

    def test_visits_every_state(self) -> None:
        start = StretchConfig((3,), 4)
        chain = StretchChain(4, make_params(0.01), make_rng(8), start)
        seen = set()
        for _ in range(20_000):
            chain.step()
            seen.add(tuple(chain.state))
        self.assertEqual(len(seen), count_configs(4))

    def test_matches_gibbs_law(self) -> None:
        ens = sample_ensemble(4, 1.0, 50_000, seed=6, kind="mcmc", burn_in=1000, thin=5)
        tv = total_variation(empirical_law(ens.configs), gibbs_law(4, 1.0))
        self.assertLess(tv, 0.03)

    def test_start_must_match_length(self) -> None:
        with self.assertRaises(InvalidConfigurationError):
            StretchChain(5, make_params(1.0), make_rng(0), StretchConfig((3,), 4))
        with self.assertRaises(InvalidConfigurationError):
            StretchChain(0, make_params(1.0), make_rng(0))

    def test_bad_chain_parameters(self) -> None:
        with self.assertRaises(RunConfigError):
            sample_mcmc(5, make_params(1.0), make_rng(0), steps=10, burn_in=0, thin=0)
        with self.assertRaises(RunConfigError):
            sample_ensemble(5, 1.0, 10, seed=0, kind="gibbs")

    def test_needs_two_monomers(self) -> None:
        with self.assertRaises(DomainError):
            sample_mcmc(1, make_params(1.0), make_rng(0), steps=10, burn_in=0, thin=1)
        with self.assertRaises(DomainError):
            sample_ensemble(1, 1.0, 5, seed=0, kind="mcmc")

    def test_thinning(self) -> None:
        ens = sample_mcmc(10, make_params(1.0), make_rng(1), steps=100, burn_in=10, thin=7)
        self.assertEqual(len(ens), 14)
        self.assertEqual((ens.burn_in, ens.thin), (10, 7))


def tv_to_gibbs(length: int, beta: float, total: int, kind: str, chunk: int = 250_000, **chain: int) -> float:
    """Pool `total` draws in chunks of independent streams and compare with the enumerated law."""
    counts: Counter[tuple[int, ...]] = Counter()
    for k in range(total // chunk):
        ens = sample_ensemble(length, beta, chunk, seed=1000 + k, kind=kind, workers=4, **chain)
        counts.update(c.stretches for c in ens.configs)
    drawn = sum(counts.values())
    return total_variation({s: c / drawn for s, c in counts.items()}, gibbs_law(length, beta))


@unittest.skipUnless(SLOW, "set IPDSAW_SLOW=1")
class TestSamplerExactness(unittest.TestCase):
    def test_exact_sampler_at_length_eight(self) -> None:
        for beta in (0.5, 1.0, 2.0):
            self.assertLessEqual(tv_to_gibbs(8, beta, 2_000_000, "exact"), 0.01, msg=f"beta={beta}")

    def test_chain_at_length_eight(self) -> None:
        for beta in (0.5, 1.0, 2.0):
            tv = tv_to_gibbs(8, beta, 1_000_000, "mcmc", burn_in=10_000, thin=50)
            self.assertLessEqual(tv, 0.02, msg=f"beta={beta}")


@unittest.skipUnless(SLOW, "set IPDSAW_SLOW=1")
class TestSamplersAtLargerLength(unittest.TestCase):
    def test_exact_and_chain_agree_on_mean_energy(self) -> None:
        exact = sample_ensemble(24, 1.5, 4000, seed=1)
        chain = sample_ensemble(24, 1.5, 4000, seed=1, kind="mcmc", burn_in=20_000, thin=200)
        a = np.mean([hamiltonian(c) for c in exact.configs])
        b = np.mean([hamiltonian(c) for c in chain.configs])
        self.assertLess(abs(a - b) / a, 0.1)


class TestEnsembleText(unittest.TestCase):
    def test_round_trip(self) -> None:
        ens = sample_ensemble(9, 1.25, 20, seed=2, kind="mcmc", burn_in=100, thin=3)
        back = Ensemble.from_text(ens.to_text(["config={}"]))
        self.assertEqual(back.configs, ens.configs)
        self.assertEqual((back.beta, back.length, back.seed, back.kind), (1.25, 9, 2, "mcmc"))
        self.assertEqual((back.burn_in, back.thin), (100, 3))

    def test_line_format(self) -> None:
        ens = Ensemble(1.0, 4, 0, "exact", [StretchConfig((1, -1), 4)])
        lines = ens.to_text().splitlines()
        self.assertEqual(lines[0], "# ipdsaw v1 beta=1.0 L=4 seed=0 kind=exact")
        self.assertEqual(lines[1], "2 1 -1")

    def test_rejects_bad_input(self) -> None:
        with self.assertRaises(InvalidConfigurationError):
            Ensemble.from_text("hello\n")
        with self.assertRaises(InvalidConfigurationError):
            Ensemble.from_text("# ipdsaw v1 beta=1.0 L=4 seed=0 kind=exact\n3 1 -1\n")
        with self.assertRaises(InvalidConfigurationError):
            Ensemble.from_text("# ipdsaw v1 beta=1.0 L=5 seed=0 kind=exact\n2 1 -1\n")
        with self.assertRaises(RunConfigError):
            Ensemble(1.0, 4, 0, "gibbs")


if __name__ == "__main__":
    unittest.main()

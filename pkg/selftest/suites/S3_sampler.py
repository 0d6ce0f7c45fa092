"""Exact and Markov-chain samplers against the enumerated Gibbs law at L = 8."""

CHECKS = [
    {"check": "extension_law", "L": 8, "beta": 1.0},
    {"check": "sampler_tv", "kind": "exact", "L": 8, "beta": 0.5, "samples": 2000000, "chunk": 250000, "workers": 4, "seed": 110, "tol": 0.01},
    {"check": "sampler_tv", "kind": "exact", "L": 8, "beta": 1.0, "samples": 2000000, "chunk": 250000, "workers": 4, "seed": 120, "tol": 0.01},
    {"check": "sampler_tv", "kind": "exact", "L": 8, "beta": 2.0, "samples": 2000000, "chunk": 250000, "workers": 4, "seed": 130, "tol": 0.01},
    {"check": "sampler_tv", "kind": "mcmc", "L": 8, "beta": 0.5, "samples": 1000000, "chunk": 250000, "workers": 4, "seed": 210, "burn_in": 10000, "thin": 50, "tol": 0.02},
    {"check": "sampler_tv", "kind": "mcmc", "L": 8, "beta": 1.0, "samples": 1000000, "chunk": 250000, "workers": 4, "seed": 220, "burn_in": 10000, "thin": 50, "tol": 0.02},
    {"check": "sampler_tv", "kind": "mcmc", "L": 8, "beta": 2.0, "samples": 1000000, "chunk": 250000, "workers": 4, "seed": 230, "burn_in": 10000, "thin": 50, "tol": 0.02},
]

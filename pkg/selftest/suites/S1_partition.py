"""Partition functions: golden values, three engines, connective constant, pattern law."""

CHECKS = [
    {"check": "golden", "beta": 1.0},
    {"check": "golden", "beta": 0.3},
    {"check": "engines", "betas": [0.0, 0.5, "beta_c", 2.0], "brute_max": 12, "walk_betas": [0.5, 1.0, 2.0], "walk_max": 64},
    {"check": "connective", "L": 512},
    {"check": "pattern_mass", "beta": 0.5},
]

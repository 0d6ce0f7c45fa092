"""Collapsed-phase shape: gradient inversion, rate against the area DP, curve invariants."""

CHECKS = [
    {"check": "wulff_inversion", "beta": 2.0},
    {"check": "g_rate", "beta": 2.0, "u": 0.05, "n": 200, "tol": 0.02},
    {"check": "g_rate", "beta": 2.0, "u": 0.1, "n": 200, "tol": 0.02},
    {"check": "wulff_curve", "beta": 2.0, "grid": 200},
]

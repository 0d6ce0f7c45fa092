"""Critical point, Airy constant, free energy against the DP, critical decay exponent."""

CHECKS = [
    {"check": "critical"},
    {"check": "airy"},
    {"check": "free_energy_dp", "beta": 0.8, "L": 512, "tol": 5e-3},
    {"check": "critical_decay", "lengths": [64, 128, 256, 512]},
]

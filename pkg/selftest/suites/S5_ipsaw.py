"""Path families: inclusion chain and midpoint/stretch energy agreement."""

CHECKS = [
    {"check": "ipsaw_chain", "L": 12, "betas": [0.5, 1.0]},
    {"check": "midpoint_equivalence", "L": 12},
]

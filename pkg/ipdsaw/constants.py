"""Numerical tolerances, guards and file-format constants."""

from __future__ import annotations

import math

TOOL_NAME = "ipdsaw"
TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1
ENSEMBLE_MAGIC = "# ipdsaw v1"

# Connective constant of partially directed paths (growth rate at beta = 0).
MU_PD = 1.0 + math.sqrt(2.0)
LOG_MU_PD = math.log(MU_PD)

# Size guards
BRUTE_FORCE_MAX_L = 14
DP_MAX_L = 4096
WALK_MAX_L = 4096
EXACT_SAMPLER_MAX_L = 2048
SAW_MAX_L = 16
DIRECTED_MAX_L = 20

# Tolerances
CRITICAL_XTOL = 1e-15
CRITICAL_RESIDUAL = 1e-12
EIGEN_TOL = 1e-10
RAYLEIGH_TOL = 1e-12
FREE_ENERGY_XTOL = 1e-10
QUAD_EPSABS = 1e-12
NEWTON_TOL = 1e-10
NEWTON_MAX_HALVINGS = 40
NEWTON_MAX_ITER = 200
DOMAIN_MARGIN = 1e-9
PATTERN_TAIL = 1e-14
PMF_TAIL = 1e-16

# Bracket of the coarse scan for the extension constant.
A_SCAN_LOW = 0.05
A_SCAN_HIGH = 20.0
A_SCAN_POINTS = 120
A_XTOL = 1e-8

# Exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_SELFTEST = 4

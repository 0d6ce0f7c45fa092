"""Oracle self-test harness: named suites of numerical checks against independent oracles."""

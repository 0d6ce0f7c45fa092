"""Selftest runner: load suites from selftest/suites/ and run their checks in order."""

from __future__ import annotations

import argparse
import importlib.util
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from .checks import check_from_spec, run_check

logger = logging.getLogger(__name__)

SUITES_DIR = Path(__file__).resolve().parent / "suites"


def suite_names() -> list[str]:
    return sorted(p.stem for p in SUITES_DIR.glob("S*.py"))


def load_suite(name: str) -> Optional[List[Dict[str, Any]]]:
    """Load CHECKS from selftest/suites/<name>.py; "S1" also finds "S1_partition"."""
    path = SUITES_DIR / f"{name}.py"
    if not path.is_file():
        matches = [p for p in sorted(SUITES_DIR.glob(f"{name}_*.py"))]
        if not matches:
            return None
        path = matches[0]
    spec = importlib.util.spec_from_file_location("suite", path)
    if spec is None or spec.loader is None:
        return None
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return getattr(mod, "CHECKS", None)


def run_suite(checks: List[Dict[str, Any]], verbose: bool = False, failfast: bool = False) -> int:
    """Run checks in order; prints FAIL lines always and PASS lines when verbose. 0 if all pass."""
    failed = False
    for i, spec in enumerate(checks):
        name, kwargs = check_from_spec(spec)
        if verbose:
            print(f"  step {i + 1}: {name} {kwargs}")
        start = time.perf_counter()
        try:
            ok, detail = run_check(name, **kwargs)
        except Exception as e:  # a crashing check is a failing check
            ok, detail = False, f"{type(e).__name__}: {e}"
        logger.debug("check %s took %.2fs", name, time.perf_counter() - start)
        if not ok:
            print(f"FAIL step {i + 1} ({name}): {detail}")
            failed = True
            if failfast:
                break
            continue
        if verbose:
            print(f"  PASS step {i + 1} ({detail})")
    return 1 if failed else 0


def run_suites(names: Optional[List[str]] = None, verbose: bool = False, failfast: bool = False) -> list[str]:
    """Run the named suites (all when None); returns the names of failing suites."""
    failing = []
    for name in names or suite_names():
        checks = load_suite(name)
        if checks is None:
            print(f"Suite not found: {name}")
            failing.append(name)
            continue
        print(f"{name}:")
        if run_suite(checks, verbose=verbose, failfast=failfast):
            failing.append(name)
            if failfast:
                break
        else:
            print("PASS")
    return failing


def main() -> int:
    parser = argparse.ArgumentParser(description="Run ipdsaw oracle suites")
    parser.add_argument("suites", nargs="*", help="Suite names (e.g. S1_partition or S1); default all")
    parser.add_argument("--verbose", "-v", action="store_true", help="Show each check and PASS lines")
    parser.add_argument("--failfast", action="store_true", help="Stop on first failure")
    args = parser.parse_args()
    return 1 if run_suites(args.suites or None, verbose=args.verbose, failfast=args.failfast) else 0


if __name__ == "__main__":
    sys.exit(main())

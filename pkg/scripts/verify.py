#!/usr/bin/env python
"""Verification script - run after making changes to ensure nothing is broken.

Usage:
    python scripts/verify.py          # Run unit tests + CLI smoke run
    python scripts/verify.py --slow   # Also run the acceptance suite
"""

import argparse
import subprocess
import sys
import tempfile


def run_command(cmd: list[str], description: str, timeout: int = 600) -> bool:
    """Run a command and return True if successful."""
    print(f"\n{'=' * 60}")
    print(f"  {description}")
    print('=' * 60)

    try:
        result = subprocess.run(
            cmd,
            timeout=timeout,
            capture_output=False
        )
        return result.returncode == 0
    except subprocess.TimeoutExpired:
        print(f"  Timed out after {timeout}s")
        return False
    except Exception as e:
        print(f"  Error: {e}")
        return False


def main():
    parser = argparse.ArgumentParser(description="Run verification checks")
    parser.add_argument("--slow", action="store_true", help="Run the acceptance suite too")
    args = parser.parse_args()

    print("\n" + "=" * 60)
    print("  VERIFICATION SCRIPT")
    print("=" * 60)

    all_passed = True

    # 1. Unit tests (slow tests are deselected by pytest.ini)
    if not run_command([sys.executable, "-m", "pytest", "tests/"], "Running unit tests..."):
        all_passed = False
        print("\n  FAILED: Unit tests did not pass")
    else:
        print("\n  PASSED: All unit tests passed")

    # 2. CLI smoke runs
    with tempfile.TemporaryDirectory() as outdir:
        smoke = [
            ["ggm-curve", "--n", "50", "--alpha", "0,1,2", "--t", "0:3pi:0.01"],
            ["oracle", "--n-max", "8", "--trials", "20", "--t-max", "pi"],
            ["measure"],
        ]
        for args_ in smoke:
            cmd = [sys.executable, "-m", "wgslab", *args_, "--outdir", outdir]
            if not run_command(cmd, f"wgslab {' '.join(args_)}", timeout=120):
                all_passed = False
                print(f"\n  FAILED: wgslab {args_[0]}")

    # 3. Acceptance suite (optional)
    if args.slow:
        if not run_command(
            [sys.executable, "-m", "pytest", "tests/acceptance/", "-m", "slow"],
            "Running acceptance tests...",
            timeout=3600
        ):
            all_passed = False
            print("\n  FAILED: Acceptance tests did not pass")
        else:
            print("\n  PASSED: All acceptance tests passed")

    # Summary
    print("\n" + "=" * 60)
    if all_passed:
        print("  ALL CHECKS PASSED")
    else:
        print("  SOME CHECKS FAILED")
    print("=" * 60 + "\n")

    return 0 if all_passed else 1


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
MEV-ACE Lab Setup Script

This script installs the dependencies, creates the run archive and checks
that the bundled scenarios are consistent.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).parent


def run_command(command, description):
    """Run a command and handle errors."""
    print(f"🔄 {description}...")
    try:
        subprocess.run(command, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed: {e}")
        if e.stdout:
            print(f"Output: {e.stdout}")
        if e.stderr:
            print(f"Error: {e.stderr}")
        return False


def check_python():
    """Check the interpreter version."""
    print("🐍 Checking Python installation...")
    if sys.version_info < (3, 11):
        print(f"❌ Python 3.11+ required, found {sys.version.split()[0]}")
        return False
    print(f"✅ Python found: {sys.version.split()[0]}")
    return True


def install_dependencies():
    requirements_file = ROOT / "requirements.txt"
    if not requirements_file.exists():
        print("❌ requirements.txt not found")
        return False
    return run_command(
        [sys.executable, "-m", "pip", "install", "-r", str(requirements_file)],
        "Installing dependencies",
    )


def initialize_archive():
    init_script = ROOT / "scripts" / "init_db.py"
    if not init_script.exists():
        print("❌ Archive initialization script not found")
        return False
    return run_command([sys.executable, str(init_script)], "Initializing run archive")


def check_scenarios():
    """Run check-config over every bundled scenario."""
    scenarios = sorted((ROOT / "fixtures").glob("*.json"))
    if not scenarios:
        print("⚠️  No scenarios found, skipping")
        return True
    return all(
        run_command([sys.executable, "-m", "app.main", "check-config", str(path)], f"Checking {path.name}")
        for path in scenarios
    )


def main():
    """Main setup function."""
    print("🚀 MEV-ACE Lab Setup")
    print("=" * 40)

    steps = [
        ("Check Python", check_python),
        ("Install Dependencies", install_dependencies),
        ("Initialize Archive", initialize_archive),
        ("Check Scenarios", check_scenarios),
    ]

    success_count = 0
    for step_name, step_func in steps:
        print(f"\n📋 Step: {step_name}")
        if step_func():
            success_count += 1
        else:
            print(f"⚠️  {step_name} failed, but continuing...")

    print("\n" + "=" * 40)
    print(f"Setup completed: {success_count}/{len(steps)} steps successful")

    if success_count == len(steps):
        print("🎉 MEV-ACE Lab setup completed successfully!")
        print("\nNext steps:")
        print("1. Run: python -m app.main run-slot fixtures/honest_baseline.json")
        print("2. Run: python -m app.main run-campaign fixtures/honest_baseline.json --slots 50 --seeds 1,2,3")
        print("3. Run: pytest")
    else:
        print("⚠️  Setup completed with some issues. Please review the output above.")

    return success_count == len(steps)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)

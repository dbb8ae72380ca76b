#!/usr/bin/env python3
"""
mvpir - Main entry point.

Matching-vector private information retrieval with derivative answers:
bundle setup, servers, queries, privacy audits and benchmarks.
"""
import sys
import subprocess
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))


def install_requirements():
    """Install required packages that cannot be imported."""
    required_packages = {
        'galois': 'galois>=0.3',
        'numpy': 'numpy>=1.21',
        'yaml': 'PyYAML>=6.0',
        'jinja2': 'Jinja2>=3.0',
    }

    missing_packages = []

    for module_name, package_spec in required_packages.items():
        try:
            __import__(module_name)
        except ImportError:
            missing_packages.append(package_spec)

    if missing_packages:
        print(f"Installing missing dependencies: {', '.join(missing_packages)}", file=sys.stderr)
        try:
            subprocess.check_call([
                sys.executable, '-m', 'pip', 'install', *missing_packages
            ])
        except subprocess.CalledProcessError as e:
            print(f"Error installing dependencies: {e}", file=sys.stderr)
            print("Install them manually: pip install -r requirements.txt", file=sys.stderr)
            return False

    return True


if __name__ == "__main__":
    # Install requirements before importing the toolkit
    if install_requirements():
        from cli import main
        sys.exit(main())
    else:
        sys.exit(2)

#!/usr/bin/env python3
"""
D-RIP Toolkit — Entry Point

Usage:
    python . selftest
    python . --seed 1 experiment --trials 20
"""

from src.cli import main

if __name__ == "__main__":
    main()

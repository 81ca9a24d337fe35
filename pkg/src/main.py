#!/usr/bin/env python3
"""
Watchtower solver
Main entry point for the command-line interface.
"""

import sys
from typing import List, Optional

from cli.commands import run


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())

"""ROGUE bandit benchmark entry point: `python -m src.main run|summarize ...`."""
import sys

from src.contexts.benchmark.infrastructure.adapters import main


if __name__ == "__main__":
    sys.exit(main())

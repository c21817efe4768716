"""Allow running as python -m induced_forest."""

from induced_forest.main import main

if __name__ == "__main__":
    raise SystemExit(main())

"""Main entry point for the causalrep CLI."""

from .adapters.cli.main import main

if __name__ == "__main__":
    main()

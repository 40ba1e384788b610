"""Banner for the causalrep CLI."""

from rich.console import Console
from rich.text import Text

from ... import __version__


def print_banner(console: Console):
    """Print a one-line title with the version."""
    title = Text("causalrep", style="bold cyan")
    title.append(f" v{__version__}", style="dim cyan")
    title.append("  counterfactual features under dataset shift", style="italic dim cyan")
    console.print(title)
    console.print("─" * 60, style="cyan")

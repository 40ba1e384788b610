"""Main CLI application entry point."""

import sys
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from .banner import print_banner
from .commands import (
    adjust_command,
    colorize_command,
    config_command,
    diagnose_command,
    experiment_command,
    train_command,
)

app = typer.Typer(
    name="causalrep",
    help="causalrep - counterfactual deconfounding of learned features on colored MNIST",
    add_completion=False,
    no_args_is_help=True,
    rich_markup_mode="rich",
)

console = Console()
err_console = Console(stderr=True)

ConfigOption = typer.Option(None, "--config", "-c", help="Path to configuration file")
OutOption = typer.Option(None, "--out", "-o", help="Output directory (overrides output.output_directory)")
SeedOption = typer.Option(None, "--seed", help="Base RNG seed (overrides experiment.base_seed)")
# adjust and diagnose draw no random numbers
InertSeedOption = typer.Option(
    None, "--seed", help="Accepted for consistency; has no effect on this command"
)
VerboseOption = typer.Option(False, "--verbose", "-v", help="Show technical error details")


@app.command(name="colorize")
def colorize(
    pr: Optional[float] = typer.Option(
        None,
        "--pr",
        min=0.0,
        max=1.0,
        help="Color only the training split at this proportion",
    ),
    seed: Optional[int] = SeedOption,
    config: Optional[str] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Emit colored datasets.

    Writes train.bin (pr 0.98) and test_<shift>.bin for the six shift levels.
    """
    colorize_command(pr=pr, seed=seed, config_path=config, out=out, verbose=verbose, console=console)


@app.command(name="train")
def train(
    data: Path = typer.Argument(..., help="Colored dataset container to train on", exists=True),
    extract: bool = typer.Option(
        False, "--extract", help="Write features, labels and confounders as CSV"
    ),
    extract_from: Optional[list[Path]] = typer.Option(
        None, "--extract-from", help="Further colored datasets to extract features from", exists=True
    ),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=1, help="Training epochs"),
    seed: Optional[int] = SeedOption,
    config: Optional[str] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Train and checkpoint a feature learner.

    Writes network.ckpt, and with --extract the learned features.
    """
    train_command(
        data_path=data,
        extract=extract,
        extract_from=extract_from,
        epochs=epochs,
        seed=seed,
        config_path=config,
        out=out,
        verbose=verbose,
        console=console,
    )


@app.command(name="adjust")
def adjust(
    train_features: Path = typer.Option(
        ..., "--train-features", help="Training feature CSV", exists=True
    ),
    train_labels: Optional[Path] = typer.Option(
        None, "--train-labels", help="Training label CSV", exists=True
    ),
    train_confounders: Optional[Path] = typer.Option(
        None, "--train-confounders", help="Training confounder CSV (one column per confounder)", exists=True
    ),
    test_features: Optional[list[Path]] = typer.Option(
        None, "--test-features", help="Test feature CSV (repeatable)", exists=True
    ),
    test_confounders: Optional[list[Path]] = typer.Option(
        None, "--test-confounders", help="Test confounder CSV, paired with --test-features", exists=True
    ),
    fit: Optional[Path] = typer.Option(
        None, "--fit", help="Reuse a saved fit table instead of fitting", exists=True
    ),
    seed: Optional[int] = InertSeedOption,
    config: Optional[str] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Remove the confounder contribution from learned features.

    Fits X ~ 1 + Y + C on the training files and subtracts the C terms from
    training and test features. Test labels are never read.
    """
    adjust_command(
        train_features=train_features,
        train_labels=train_labels,
        train_confounders=train_confounders,
        test_features=test_features,
        test_confounders=test_confounders,
        fit_path=fit,
        seed=seed,
        config_path=config,
        out=out,
        verbose=verbose,
        console=console,
    )


@app.command(name="diagnose")
def diagnose(
    predictions: Path = typer.Argument(..., help="Predictions CSV (r_hat,color,label[,...])", exists=True),
    output_format: Optional[str] = typer.Option(
        None, "--format", "-f", help="Output format (console, json, csv)"
    ),
    seed: Optional[int] = InertSeedOption,
    config: Optional[str] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Conditional-independence report per (replication, shift, method).
    """
    diagnose_command(
        predictions_path=predictions,
        output_format=output_format,
        seed=seed,
        config_path=config,
        out=out,
        verbose=verbose,
        console=console,
    )


@app.command(name="experiment")
def experiment(
    replications: Optional[int] = typer.Option(None, "--replications", "-r", min=1, help="Number of replications"),
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = typer.Option(None, "--workers", "-w", min=1, help="Replications run concurrently"),
    n_train: Optional[int] = typer.Option(None, "--n-train", min=10, help="Training images kept"),
    n_test: Optional[int] = typer.Option(None, "--n-test", min=30, help="Test images kept"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=1, help="Training epochs"),
    downscale: Optional[bool] = typer.Option(None, "--downscale/--no-downscale", help="Pool images to 14x14"),
    data_dir: Optional[Path] = typer.Option(
        None, "--data-dir", help="Directory holding the four standard MNIST IDX files", exists=True, file_okay=False
    ),
    save_predictions: bool = typer.Option(False, "--save-predictions", help="Also write predictions.csv"),
    acceptance: bool = typer.Option(False, "--acceptance", help="Evaluate and print the acceptance checks"),
    output_format: Optional[str] = typer.Option(
        None, "--format", "-f", help="Summary format (console, json, csv)"
    ),
    config: Optional[str] = ConfigOption,
    out: Optional[Path] = OutOption,
    verbose: bool = VerboseOption,
):
    """
    Run the full replicated protocol.

    Writes results.csv, ci_reports.csv and summary.csv to the output directory.
    """
    experiment_command(
        replications=replications,
        seed=seed,
        workers=workers,
        n_train=n_train,
        n_test=n_test,
        epochs=epochs,
        downscale=downscale,
        data_dir=data_dir,
        save_predictions=save_predictions,
        acceptance=acceptance,
        output_format=output_format,
        config_path=config,
        out=out,
        verbose=verbose,
        console=console,
    )


@app.command(name="config")
def config_cmd(
    init: bool = typer.Option(False, "--init", help="Create default configuration file"),
    path: Optional[str] = typer.Option(None, "--path", help="Configuration file path"),
    show: bool = typer.Option(False, "--show", help="Show current configuration"),
):
    """
    Manage configuration.

    Create, view, or locate configuration files.
    """
    config_command(init=init, path=path, show=show, console=console)


def main():
    """Main entry point."""
    try:
        if len(sys.argv) > 1 and sys.argv[1] not in ['--help', '-h', '--version']:
            print_banner(err_console)
        app()
    except KeyboardInterrupt:
        err_console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(130)
    except Exception as e:
        err_console.print("\n[bold red]Error:[/bold red]", end=" ")
        err_console.print(str(e), markup=False)
        sys.exit(1)


if __name__ == "__main__":
    main()

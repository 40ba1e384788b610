"""CLI command implementations."""

import asyncio
from pathlib import Path
from typing import Optional

import numpy as np
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table
from rich.text import Text

from ...application.commands.run_experiment import RunExperimentCommand
from ...domain.services.acceptance import evaluate_acceptance
from ...domain.services.ci_diagnostics import ci_report
from ...domain.services.colorizer import colorize, joint_proportions, make_shift_suite, subset_raw
from ...domain.services.deconfounder import adjust_test, fit_and_adjust_train
from ...domain.services.neural_network import (
    extract_features,
    init_network,
    train,
    training_accuracy,
)
from ...infrastructure.config.config_loader import ConfigLoader
from ...infrastructure.di.container import DIContainer
from ...infrastructure.persistence.checkpoint_store import save_checkpoint
from ...infrastructure.persistence.colored_dataset_store import (
    load_colored_dataset,
    save_colored_dataset,
    save_shift_suite,
)
from ...infrastructure.persistence.feature_store import (
    load_columns,
    load_features,
    save_columns,
    save_features,
)
from ...infrastructure.persistence.fit_table_store import load_fit_table, save_fit_table
from ...infrastructure.persistence.idx_reader import load_mnist_idx
from ...infrastructure.persistence.results_store import load_predictions
from ...infrastructure.presentation.error_presenter import ErrorPresenter
from ..formatters.formatter_factory import FormatterFactory

USAGE_ERROR = 2


def _fail(e: BaseException, verbose: bool, console: Console) -> None:
    """Print ``e`` through the presenter and exit (2 for missing inputs, else 1)."""
    console.print(f"\n{ErrorPresenter.present(e, verbose=verbose)}", markup=False)
    raise SystemExit(USAGE_ERROR if isinstance(e, FileNotFoundError) else 1)


def _emit(console: Console, rendered: str) -> None:
    """Print formatter output verbatim (ANSI styles kept, no markup parsing)."""
    console.print(Text.from_ansi(rendered.rstrip("\n")), soft_wrap=True)


def _container(
    config_path: Optional[str], out: Optional[Path], seed: Optional[int] = None
) -> DIContainer:
    """Load configuration and apply the shared --out and --seed overrides."""
    container = DIContainer.create(config_path)
    if seed is not None:
        container.config.experiment.base_seed = seed
    if out is not None:
        container.config.output.output_directory = str(out)
    return container


def _output_directory(container: DIContainer) -> Path:
    path = Path(container.config.output.output_directory)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _proportions_table(title: str, rows: list[tuple[str, float, np.ndarray]]) -> Table:
    table = Table(title=title)
    for column in ("set", "pr", "n", "Y=0 green", "Y=0 red", "Y=1 green", "Y=1 red"):
        table.add_column(column, justify="left" if column == "set" else "right")
    for name, pr, (n, joint) in rows:
        table.add_row(
            name, f"{pr:.2f}", str(n),
            f"{joint[0, 0]:.3f}", f"{joint[1, 0]:.3f}", f"{joint[0, 1]:.3f}", f"{joint[1, 1]:.3f}",
        )
    return table


def colorize_command(
    pr: Optional[float],
    seed: Optional[int],
    config_path: Optional[str],
    out: Optional[Path],
    verbose: bool,
    console: Console,
):
    """
    Write colored datasets.

    Without ``pr``: the training set (pr = 0.98) and the six shift test sets.
    With ``pr``: the training split alone, colored at that proportion.
    """
    console.print(Panel.fit("[bold]causalrep colorize[/bold]", border_style="blue"))
    try:
        container = _container(config_path, out, seed)
        data = container.config.data
        seed = container.config.experiment.base_seed
        directory = _output_directory(container)

        train_raw = subset_raw(load_mnist_idx(data.train_images, data.train_labels), data.n_train, seed)
        if pr is not None:
            dataset = colorize(train_raw, pr, seed)
            path = save_colored_dataset(directory / f"colored_pr{pr:g}.bin", dataset)
            console.print(_proportions_table("Pr(C, Y)", [(path.name, pr, (dataset.n, joint_proportions(dataset)))]))
            console.print(f"[green]Wrote {path}[/green]")
            return

        test_raw = subset_raw(load_mnist_idx(data.test_images, data.test_labels), data.n_test, seed + 1)
        suite = make_shift_suite(train_raw, test_raw, seed)
        paths = save_shift_suite(directory, suite)

        rows = [("train", suite.train.pr, (suite.train.n, joint_proportions(suite.train)))]
        rows += [
            (shift.value, d.pr, (d.n, joint_proportions(d))) for shift, d in suite.tests.items()
        ]
        console.print(_proportions_table("Pr(C, Y) of the shift suite", rows))
        console.print(f"[green]Wrote {len(paths)} datasets to {directory}[/green]")
    except Exception as e:
        _fail(e, verbose, console)


def train_command(
    data_path: Path,
    extract: bool,
    extract_from: Optional[list[Path]],
    epochs: Optional[int],
    seed: Optional[int],
    config_path: Optional[str],
    out: Optional[Path],
    verbose: bool,
    console: Console,
):
    """
    Train a feature learner on a colored dataset and checkpoint it.

    With ``extract``, features, labels and confounders of the training set
    (and of every ``extract_from`` dataset) are written as CSV.
    """
    console.print(Panel.fit("[bold]causalrep train[/bold]", border_style="blue"))
    try:
        container = _container(config_path, out, seed)
        if epochs is not None:
            container.config.network.epochs = epochs
        directory = _output_directory(container)
        dataset = load_colored_dataset(data_path)
        height, width = dataset.image_shape
        config = container.network_config(
            input_width=2 * height * width,
            seed=container.config.experiment.base_seed,
        )

        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console) as progress:
            task = progress.add_task("Training...", total=config.epochs)

            def on_epoch(epoch: int, loss: float) -> None:
                progress.update(task, advance=1, description=f"Epoch {epoch}/{config.epochs} loss {loss:.4f}")

            result = train(init_network(config), dataset, on_epoch=on_epoch)
            progress.update(task, description="[green]Training complete!")

        checkpoint = save_checkpoint(directory / "network.ckpt", result.network)
        console.print(f"Training accuracy: {training_accuracy(result.network, dataset):.4f}")
        console.print(f"Loss trace: {', '.join(f'{v:.4f}' for v in result.loss_trace)}")
        console.print(f"[green]Checkpoint written to {checkpoint}[/green]")

        if extract:
            sources = [data_path, *(extract_from or [])]
            for source in sources:
                target = dataset if source == data_path else load_colored_dataset(source)
                stem = Path(source).stem
                features = extract_features(result.network, target.images)
                save_features(directory / f"features_{stem}.csv", features.values)
                save_columns(directory / f"labels_{stem}.csv", label=target.labels)
                save_columns(directory / f"confounders_{stem}.csv", C=target.colors)
                console.print(f"[green]Extracted {features.n} x {features.k} features from {stem}[/green]")
    except Exception as e:
        _fail(e, verbose, console)


def _label_vector(path: Path) -> np.ndarray:
    frame = load_columns(path)
    column = "label" if "label" in frame else frame.columns[0]
    return frame[column].to_numpy()


def adjust_command(
    train_features: Path,
    train_labels: Optional[Path],
    train_confounders: Optional[Path],
    test_features: Optional[list[Path]],
    test_confounders: Optional[list[Path]],
    fit_path: Optional[Path],
    seed: Optional[int],
    config_path: Optional[str],
    out: Optional[Path],
    verbose: bool,
    console: Console,
):
    """
    Apply the counterfactual adjustment to feature CSV files.

    The training fit is estimated from (features, labels, confounders) or
    read from ``fit_path``; test files are adjusted with it and never need
    labels. Outputs: fit.tsv, adjusted_<stem>.csv per input.
    """
    console.print(Panel.fit("[bold]causalrep adjust[/bold]", border_style="blue"))
    try:
        container = _container(config_path, out, seed)
        directory = _output_directory(container)
        test_features = test_features or []
        test_confounders = test_confounders or []
        if len(test_features) != len(test_confounders):
            raise ValueError(
                f"{len(test_features)} test feature files but "
                f"{len(test_confounders)} test confounder files"
            )

        if fit_path is not None:
            fit = load_fit_table(fit_path)
            console.print(f"Loaded fit for {fit.k} features from {fit_path}")
        else:
            if train_labels is None or train_confounders is None:
                raise ValueError("--train-labels and --train-confounders are required without --fit")
            confounders = load_columns(train_confounders)
            adjusted, fit = fit_and_adjust_train(
                load_features(train_features),
                _label_vector(train_labels),
                confounders.to_numpy(dtype=float),
                confounder_names=[str(c) for c in confounders.columns],
                tolerance=container.config.deconfound.min_singular_value,
            )
            save_fit_table(directory / "fit.tsv", fit)
            save_features(directory / f"adjusted_{train_features.stem}.csv", adjusted.values, prefix="xstar")
            console.print(f"[green]Fitted {fit.k} features on {adjusted.n} training rows[/green]")

        for features_path, confounders_path in zip(test_features, test_confounders):
            adjusted_test = adjust_test(
                load_features(features_path),
                load_columns(confounders_path).to_numpy(dtype=float),
                fit,
            )
            target = save_features(
                directory / f"adjusted_{features_path.stem}.csv", adjusted_test.values, prefix="xstar"
            )
            console.print(f"[green]Adjusted {adjusted_test.n} rows -> {target}[/green]")
    except Exception as e:
        _fail(e, verbose, console)


def diagnose_command(
    predictions_path: Path,
    output_format: Optional[str],
    seed: Optional[int],
    config_path: Optional[str],
    out: Optional[Path],
    verbose: bool,
    console: Console,
):
    """One CI report per (replication, shift, method) group of a predictions CSV."""
    try:
        container = _container(config_path, out, seed)
        thresholds = container.config.diagnostics
        reports = []
        for record in load_predictions(predictions_path):
            report = ci_report(
                record.r_hat,
                record.colors,
                record.labels,
                independence_threshold=thresholds.independence_threshold,
                dependence_threshold=thresholds.dependence_threshold,
                pr=record.shift.pr,
            )
            reports.append(((record.replication, record.shift.value, record.method.value), report))

        formatter = FormatterFactory.create(output_format or container.config.output.default_format, verbose=verbose)
        _emit(console, formatter.format_ci_reports(reports))
        if out is not None:
            csv = FormatterFactory.create("csv").format_ci_reports(reports)
            target = _output_directory(container) / "diagnostics.csv"
            target.write_text(csv)
            console.print(f"[green]Wrote {target}[/green]")
    except Exception as e:
        _fail(e, verbose, console)


def experiment_command(
    replications: Optional[int],
    seed: Optional[int],
    workers: Optional[int],
    n_train: Optional[int],
    n_test: Optional[int],
    epochs: Optional[int],
    downscale: Optional[bool],
    data_dir: Optional[Path],
    save_predictions: bool,
    acceptance: bool,
    output_format: Optional[str],
    config_path: Optional[str],
    out: Optional[Path],
    verbose: bool,
    console: Console,
):
    """Run the full replicated protocol and write the CSV outputs."""
    console.print(Panel.fit("[bold]causalrep experiment[/bold]", border_style="blue"))
    try:
        container = _container(config_path, out, seed)
        config = container.config
        if replications is not None:
            config.experiment.replications = replications
        if workers is not None:
            config.experiment.workers = workers
        if n_train is not None:
            config.data.n_train = n_train
        if n_test is not None:
            config.data.n_test = n_test
        if epochs is not None:
            config.network.epochs = epochs
        if downscale is not None:
            config.data.downscale = downscale
        if save_predictions:
            config.experiment.save_predictions = True
        if data_dir is not None:
            config.data.train_images = str(data_dir / "train-images-idx3-ubyte")
            config.data.train_labels = str(data_dir / "train-labels-idx1-ubyte")
            config.data.test_images = str(data_dir / "t10k-images-idx3-ubyte")
            config.data.test_labels = str(data_dir / "t10k-labels-idx1-ubyte")

        command: RunExperimentCommand = container.experiment_command(_output_directory(container))

        with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console) as progress:
            task = progress.add_task(
                f"Running {config.experiment.replications} replications...", total=None
            )
            result = asyncio.run(container.experiment_handler.handle(command))
            progress.update(task, description="[green]Experiment complete!")

        formatter = FormatterFactory.create(output_format or config.output.default_format, verbose=verbose)
        _emit(console, formatter.format_summary(result.summary))
        console.print(
            f"[green]{len(result.rows)} result rows written to {command.output_directory}[/green]"
        )
        if result.failures:
            console.print(
                f"[yellow]{len(result.failures)} replication(s) skipped; see failures.csv[/yellow]"
            )

        if acceptance:
            checks = evaluate_acceptance(
                result,
                independence_threshold=config.diagnostics.independence_threshold,
                dependence_threshold=config.diagnostics.dependence_threshold,
            )
            _emit(console, formatter.format_acceptance(checks))
            target = command.output_directory / "acceptance.json"
            target.write_text(FormatterFactory.create("json").format_acceptance(checks))
    except KeyboardInterrupt:
        console.print(f"\n{ErrorPresenter.present(KeyboardInterrupt(), verbose=verbose)}")
        raise SystemExit(130)
    except Exception as e:
        _fail(e, verbose, console)


def config_command(
    init: bool,
    path: Optional[str],
    show: bool,
    console: Console,
):
    """Create, show, or locate configuration files."""
    console.print(Panel.fit("[bold]causalrep configuration[/bold]", border_style="blue"))

    if init:
        config_path = ConfigLoader.create_default_config(path)
        console.print(f"\n[green]Configuration file created: {config_path}[/green]")

    elif show:
        try:
            config = ConfigLoader.load(path)
        except Exception as e:
            _fail(e, False, console)
        console.print("\n[bold]Current Configuration:[/bold]")
        console.print(config.to_yaml(), markup=False)

    else:
        config_info = ConfigLoader.get_config_info()

        console.print("\n[bold]Configuration Files:[/bold]")
        if config_info["existing_configs"]:
            for cfg in config_info["existing_configs"]:
                console.print(f"  [green]{cfg}[/green]")
        else:
            console.print("  No configuration files found")

        console.print("\n[bold]Environment Overrides:[/bold]")
        if config_info["env_overrides"]:
            for env_var in config_info["env_overrides"]:
                console.print(f"  {env_var}")
        else:
            console.print("  None")

        console.print("\n[bold]Default Locations:[/bold]")
        for default_path in config_info["default_paths"]:
            console.print(f"  {default_path}")

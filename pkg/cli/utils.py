"""CLI utilities for logging setup, output directories and formatting."""
import logging
import os
from pathlib import Path
from typing import Optional

import click

# Try to import rich for pretty output, fallback to plain text
try:
    from rich.console import Console
    from rich.logging import RichHandler
    from rich.markup import escape
    from rich.panel import Panel
    from rich.table import Table
    RICH_AVAILABLE = True
    console = Console()
    err_console = Console(stderr=True)
except ImportError:
    RICH_AVAILABLE = False
    console = None
    err_console = None

# Try to import tabulate for table formatting
try:
    from tabulate import tabulate
    TABULATE_AVAILABLE = True
except ImportError:
    TABULATE_AVAILABLE = False


def setup_logging(level: str = "INFO", verbose: bool = False):
    """Install a rich handler on the root logger; ``verbose`` forces DEBUG."""
    level = "DEBUG" if verbose else level.upper()
    handlers = [RichHandler(console=err_console, show_path=False)] if RICH_AVAILABLE else None
    logging.basicConfig(level=level, format="%(message)s", datefmt="[%X]", handlers=handlers, force=True)


def ensure_output_dir(path: Path) -> Path:
    """
    Create the output directory if needed and check it is writable.

    Raises:
        click.UsageError: if the directory cannot be created or written to
    """
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise click.UsageError(f"cannot create output directory {path}: {e}")
    if not os.access(path, os.W_OK):
        raise click.UsageError(f"output directory {path} is not writable")
    return path


def format_value(value):
    """Format a value for display."""
    if isinstance(value, bool):
        return "True" if value else "False"
    elif isinstance(value, float):
        if value != 0 and (abs(value) < 1e-3 or abs(value) >= 1e4):
            return f"{value:.3e}"
        return f"{value:.4f}"
    elif isinstance(value, int):
        return f"{value:,}"
    elif value is None:
        return "-"
    else:
        return str(value)


def _styled(message: str, style: str, err: bool = False):
    target = err_console if err else console
    if RICH_AVAILABLE and target:
        target.print(f"[{style}]{escape(message)}[/{style}]")
    else:
        click.echo(message, err=err)


def print_error(message: str):
    """Red, on stderr."""
    _styled(message, "red", err=True)


def print_success(message: str):
    _styled(message, "green")


def print_warning(message: str):
    """Flagged (non-converged or degenerate) results."""
    _styled(message, "yellow", err=True)


def format_table(data: list, headers: list, title: Optional[str] = None) -> str:
    """
    Format data as a table.

    Args:
        data: List of rows (each row is a list)
        headers: List of column headers
        title: Optional table title

    Returns:
        Formatted table string (empty when rich printed it directly)
    """
    rows = [[format_value(cell) for cell in row] for row in data]
    if RICH_AVAILABLE and console and title:
        table = Table(title=title, show_header=True, header_style="bold magenta")
        for header in headers:
            table.add_column(header)
        for row in rows:
            table.add_row(*row)
        console.print(table)
        return ""
    elif TABULATE_AVAILABLE:
        text = tabulate(rows, headers=headers, tablefmt="simple")
        return f"{title}\n{'=' * len(title)}\n{text}" if title else text
    else:
        output = []
        if title:
            output.append(title)
            output.append("=" * len(title))
        header_line = " | ".join(headers)
        output.append(header_line)
        output.append("-" * len(header_line))
        for row in rows:
            output.append(" | ".join(row))
        return "\n".join(output)


def print_panel(content: str, title: Optional[str] = None):
    """Print content in a panel."""
    if RICH_AVAILABLE and console:
        console.print(Panel(content, title=title, border_style="blue"))
    else:
        if title:
            click.echo(f"\n{'=' * 40}\n  {title}\n{'=' * 40}")
        click.echo(content)

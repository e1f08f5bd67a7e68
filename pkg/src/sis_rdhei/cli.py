# SPDX-License-Identifier: MIT


"""A command-line interface (CLI) to sis-rdhei."""


import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, List, Optional, Union

import numpy as np
import typer
from loguru import logger
from rich.console import Console
from rich.table import Table

from . import __version__
from .errors import (
    CapacityError,
    CodecError,
    ExtractionError,
    ParameterError,
    PgmFormatError,
    RecoveryError,
)
from .hc_scheme import HcShareFile, hc_embed, hc_encrypt, hc_extract, hc_recover
from .imagecore import load_pgm, save_pgm
from .keys import DataHidingKey, EncryptionKey, OsEntropy
from .metrics import build_report, er_table, format_report, reduced_sizes
from .models import Scheme
from .settings import Settings
from .sharing import SchemeParams
from .sr_scheme import SrShareFile, sr_embed, sr_encrypt, sr_expansion, sr_extract, sr_recover
from .utils import atomic_write_bytes, configure_logging

app = typer.Typer(add_completion=False)

EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_RECOVERY = 4

ShareFile = Union[HcShareFile, SrShareFile]


@contextmanager
def _exit_codes(command: str) -> Iterator[None]:
    """Logs library failures and turns them into the documented exit codes."""
    with logger.contextualize(command=command):
        try:
            yield
        except CapacityError as exc:
            logger.error("{}", exc)
            raise typer.Exit(EXIT_CAPACITY)
        except (RecoveryError, CodecError, ExtractionError) as exc:
            logger.error("{}", exc)
            raise typer.Exit(EXIT_RECOVERY)
        except (ParameterError, PgmFormatError, OSError) as exc:
            logger.error("{}", exc)
            raise typer.Exit(EXIT_USAGE)


def _settings(ctx: typer.Context) -> Settings:
    if not isinstance(ctx.obj, Settings):
        ctx.obj = Settings()
    return ctx.obj


def _load_share(scheme: Scheme, path: Path) -> ShareFile:
    img = load_pgm(path)
    if scheme == Scheme.hc:
        return HcShareFile.parse(img)
    return SrShareFile.parse(img)


@app.callback(invoke_without_command=True)
def callback(
    ctx: typer.Context,
    version: bool = typer.Option(
        False, "--version", help="Show program version.", show_default=False
    ),
    config: Path = typer.Option(Path("settings.json"), "--config", help="Settings JSON file."),
    verbose: bool = typer.Option(False, "--verbose", help="Log debug details to stderr."),
) -> None:
    """Reversible data hiding over (r, n) secret-shared encrypted images.

    The content owner splits an image into n encrypted shares, data hiders embed
    payloads into individual shares, and a receiver with any r marked shares
    recovers the image exactly.
    """
    if version:
        typer.echo(__version__)
        raise typer.Exit()
    settings = Settings(str(config))
    ctx.obj = settings
    level = "DEBUG" if verbose else str(settings.get("logging.level"))
    configure_logging(__package__ or "sis_rdhei", level, str(settings.get("logging.format")))
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(EXIT_USAGE)


@app.command()
def encrypt(
    ctx: typer.Context,
    image: Path = typer.Argument(..., help="Original 8-bit PGM image."),
    scheme: Scheme = typer.Option(..., help="Scheme to encrypt for."),
    block: Optional[int] = typer.Option(None, "--block", help="Block side S."),
    r: Optional[int] = typer.Option(None, "--r", help="Threshold r."),
    n: Optional[int] = typer.Option(None, "--n", help="Number of shares n."),
    key: Path = typer.Option(..., "--key", help="32-byte encryption key file (K_E)."),
    out_dir: Path = typer.Option(Path("."), "--out-dir", help="Directory for the shares."),
    seed: Optional[int] = typer.Option(
        None, "--seed", help="Pin the coefficient RNG (testing only)."
    ),
) -> None:
    """Split an image into n encrypted shares."""
    settings = _settings(ctx)
    with _exit_codes("encrypt"):
        params = SchemeParams(
            block if block is not None else int(settings.get("scheme.block")),
            r if r is not None else int(settings.get("scheme.r")),
            n if n is not None else int(settings.get("scheme.n")),
        )
        rng: Any = np.random.default_rng(seed) if seed is not None else OsEntropy()
        img = load_pgm(image)
        encrypt_fn = hc_encrypt if scheme == Scheme.hc else sr_encrypt
        shares = encrypt_fn(img, params, EncryptionKey.from_file(key), rng)
        name = str(settings.get("output.share_name"))
        for share in shares:
            path = save_pgm(out_dir / name.format(id=share.share_id), share.image)
            logger.info("wrote {}", path)


@app.command()
def embed(
    share: Path = typer.Argument(..., help="Share image to mark."),
    scheme: Scheme = typer.Option(..., help="Scheme the share belongs to."),
    dkey: Path = typer.Option(..., "--dkey", help="32-byte data hiding key file (K_D)."),
    payload: Path = typer.Option(..., "--payload", help="File whose bytes are hidden."),
    out: Path = typer.Option(..., "--out", help="Marked share output path."),
) -> None:
    """Hide a payload in one share."""
    with _exit_codes("embed"):
        parsed = _load_share(scheme, share)
        data = payload.read_bytes()
        key = DataHidingKey.from_file(dkey)
        if isinstance(parsed, HcShareFile):
            marked: ShareFile = hc_embed(parsed, data, key)
        else:
            marked = sr_embed(parsed, data, key)
        save_pgm(out, marked.image)
        logger.info("hid {} bytes in share {}", len(data), parsed.share_id)


@app.command()
def extract(
    share: Path = typer.Argument(..., help="Marked share image."),
    scheme: Scheme = typer.Option(..., help="Scheme the share belongs to."),
    dkey: Path = typer.Option(..., "--dkey", help="32-byte data hiding key file (K_D)."),
    out: Path = typer.Option(..., "--out", help="Where to write the payload."),
) -> None:
    """Extract the hidden payload from one marked share."""
    with _exit_codes("extract"):
        parsed = _load_share(scheme, share)
        key = DataHidingKey.from_file(dkey)
        if isinstance(parsed, HcShareFile):
            data = hc_extract(parsed, key)
        else:
            data = sr_extract(parsed, key)
        atomic_write_bytes(out, data)


@app.command()
def recover(
    shares: List[Path] = typer.Argument(..., help="At least r share images."),
    scheme: Scheme = typer.Option(..., help="Scheme the shares belong to."),
    key: Path = typer.Option(..., "--key", help="32-byte encryption key file (K_E)."),
    out: Path = typer.Option(..., "--out", help="Recovered image path."),
    unmarked: bool = typer.Option(
        False, "--unmarked", help="Size-reduced shares never went through a data hider."
    ),
) -> None:
    """Recover the original image from r or more shares."""
    with _exit_codes("recover"):
        parsed = [_load_share(scheme, p) for p in shares]
        k_e = EncryptionKey.from_file(key)
        if scheme == Scheme.hc:
            img = hc_recover([s for s in parsed if isinstance(s, HcShareFile)], k_e)
        else:
            img = sr_recover(
                [s for s in parsed if isinstance(s, SrShareFile)], k_e, marked=not unmarked
            )
        save_pgm(out, img)


@app.command()
def metrics(
    shares: Optional[List[Path]] = typer.Argument(None, help="Share images to evaluate."),
    scheme: Optional[Scheme] = typer.Option(None, help="Scheme of the share images."),
    orig: Optional[Path] = typer.Option(None, "--orig", help="Original image."),
    recovered: Optional[Path] = typer.Option(None, "--recovered", help="Recovered image."),
) -> None:
    """Print key=value measurements for images and shares."""
    with _exit_codes("metrics"):
        if shares and scheme is None:
            raise ParameterError("--scheme is required when share images are given")
        if (orig is None) != (recovered is None):
            raise ParameterError("--orig and --recovered must be given together")
        parsed = [_load_share(scheme, p) for p in shares or []] if scheme else []
        report = build_report(
            load_pgm(orig) if orig else None,
            load_pgm(recovered) if recovered else None,
            scheme,
            parsed,
        )
        typer.echo(format_report(report))


@app.command()
def keygen(
    out: Path = typer.Option(..., "--out", help="Key file to create."),
) -> None:
    """Write a fresh random 32-byte key."""
    with _exit_codes("keygen"):
        EncryptionKey.generate().to_file(out)


@app.command()
def tables(
    height: int = typer.Option(512, help="Original image height."),
    width: int = typer.Option(512, help="Original image width."),
) -> None:
    """Print the embedding-rate grid and reduced share sizes."""
    console = Console()
    with _exit_codes("tables"):
        rates = er_table()
        grid = Table(title="High-capacity embedding rate (bpp)")
        grid.add_column("S")
        grid.add_column("r")
        ns = sorted({n for _, _, n in rates})
        for n in ns:
            grid.add_column(f"n={n}", justify="right")
        for side, r in sorted({(s, r) for s, r, _ in rates}):
            cells = [f"{rates[(side, r, n)]:.4f}" if (side, r, n) in rates else "" for n in ns]
            grid.add_row(str(side), str(r), *cells)
        console.print(grid)

        configs = [(4, 2, 2), (8, 2, 2), (4, 4, 4), (8, 4, 4)]
        sizes = Table(title=f"Size-reduced shares of a {height}x{width} image")
        for column in ("S", "(r, n)", "M' x N'", "expansion"):
            sizes.add_column(column, justify="right")
        for (side, r, n), dims in reduced_sizes(height, width, configs).items():
            shapes = ", ".join(sorted({f"{rows}x{cols}" for rows, cols in dims}))
            ratio = sr_expansion(SchemeParams(side, r, n), height, width)
            sizes.add_row(str(side), f"({r}, {n})", shapes, f"{ratio:.4f}")
        console.print(sizes)


@app.command()
def config(
    ctx: typer.Context,
    key: Optional[str] = typer.Argument(None, help="Dot-notation setting, e.g. scheme.block."),
    value: Optional[str] = typer.Argument(None, help="New value (parsed as JSON when possible)."),
) -> None:
    """Show or change settings."""
    settings = _settings(ctx)
    try:
        if key is None:
            Console().print_json(json.dumps(settings.as_dict()))
        elif value is None:
            typer.echo(json.dumps(settings.get(key)))
        else:
            try:
                parsed: Any = json.loads(value)
            except json.JSONDecodeError:
                parsed = value
            settings.update(key, parsed)
    except ValueError as exc:
        logger.error("{}", exc)
        raise typer.Exit(EXIT_USAGE)

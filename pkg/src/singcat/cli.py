"""Command-line surface.

Every subcommand prints one manifest (JSON) on standard output; diagnostics
go to standard error as structured log lines. Exit codes: 0 success,
1 internal error, 2 parse error, 3 precondition violation, 4 budget
exhausted, 5 certificate replay failure.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Optional, Sequence, TextIO

from .classify import Budget, decide_dg_equivalence, verify_verdict
from .config import EngineSettings, get_settings
from .errors import ParseError, PreconditionError, SingcatError, VerificationError
from .logging_config import setup_logging
from .manifest import (
    dumps,
    germ_from_document,
    germ_from_manifest,
    hom_manifest,
    invariants_manifest,
    loads,
    mf_from_document,
    mf_from_manifest,
    mf_manifest,
    morphism_from_document,
    tyurina_manifest,
    verdict_from_manifest,
    verdict_manifest,
)
from .mf import (
    MatrixFactorization,
    cone,
    identity_morphism,
    knoerrer,
    knoerrer_squares,
    reduce,
    shift,
    stable_hom_dimension,
    zero_morphism,
)
from .models import BatchPair, ErrorDocument, HomRequest, Manifest, MFDocument, MorphismDocument
from .parser import parse_poly
from .ring import RingContext
from .singularity import Germ, invariants, tyurina_algebra

logger = logging.getLogger("singcat.cli")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="singcat", description="Singularity categories of isolated hypersurfaces")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--vars", action="append", default=[], help="comma-separated variable names (repeat per germ)")
    common.add_argument("--degree-cap", type=int, default=None, help="standard basis degree cap")
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument("--input", type=Path, default=None, help="read the input manifest from a file")

    commands = parser.add_subparsers(dest="command", required=True)
    for name in ("invariants", "tyurina"):
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument("germ", nargs="?")

    for name in ("mf-validate", "mf-shift", "mf-reduce"):
        sub = commands.add_parser(name, parents=[common])
        sub.add_argument("payload", nargs="?", help="inline JSON matrix factorization")

    knoerrer_parser = commands.add_parser("mf-knoerrer", parents=[common])
    knoerrer_parser.add_argument("payload", nargs="?")
    knoerrer_parser.add_argument("--new-vars", default="x,y", help="two fresh variable names")
    knoerrer_parser.add_argument("--squares", action="store_true", help="land over f + u^2 + v^2 instead of f + xy")

    cone_parser = commands.add_parser("mf-cone", parents=[common])
    cone_parser.add_argument("payload", nargs="?", help="inline JSON morphism, or a factorization with --morphism")
    cone_parser.add_argument("--morphism", choices=["identity", "zero"], default="identity")

    hom_parser = commands.add_parser("mf-hom", parents=[common])
    hom_parser.add_argument("payload", nargs="?", help="inline JSON {source, target}")
    hom_parser.add_argument("--degree-bound", type=int, default=None)

    classify_parser = commands.add_parser("classify", parents=[common])
    classify_parser.add_argument("germs", nargs="*")
    classify_parser.add_argument("--budget", type=int, default=None, help="linear coordinate changes to try")
    classify_parser.add_argument("--verify", action="store_true", help="replay the certificate")
    classify_parser.add_argument("--batch", action="store_true", help="read JSON pairs line by line from stdin")
    return parser


def _single_ring(args: argparse.Namespace) -> RingContext:
    if len(args.vars) != 1:
        raise ParseError("exactly one --vars declaration is required")
    return RingContext.of(args.vars[0])


def _read_manifest(path: Path) -> Manifest:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _load_mf(args: argparse.Namespace) -> MatrixFactorization:
    if args.input is not None:
        return mf_from_manifest(_read_manifest(args.input))
    if args.payload is None:
        raise ParseError("a factorization payload or --input is required")
    return mf_from_document(loads(args.payload, MFDocument), _single_ring(args))


def _load_germ(args: argparse.Namespace) -> Germ:
    if args.input is not None:
        return germ_from_manifest(_read_manifest(args.input))
    if args.germ is None:
        raise ParseError("a germ expression or --input is required")
    return Germ(parse_poly(args.germ, _single_ring(args)))


def _budget(args: argparse.Namespace, settings: EngineSettings) -> Budget:
    return Budget.from_settings(
        settings,
        degree_cap=args.degree_cap,
        witness_candidates=getattr(args, "budget", None),
    )


# --- commands ---------------------------------------------------------------------


def _cmd_invariants(args, settings) -> tuple[Manifest, int]:
    g = _load_germ(args)
    return invariants_manifest(g, invariants(g, _budget(args, settings).degree_cap)), 0


def _cmd_tyurina(args, settings) -> tuple[Manifest, int]:
    g = _load_germ(args)
    return tyurina_manifest(g, tyurina_algebra(g, _budget(args, settings).degree_cap)), 0


def _cmd_mf_validate(args, settings) -> tuple[Manifest, int]:
    return mf_manifest(_load_mf(args)), 0


def _cmd_mf_shift(args, settings) -> tuple[Manifest, int]:
    return mf_manifest(shift(_load_mf(args))), 0


def _cmd_mf_reduce(args, settings) -> tuple[Manifest, int]:
    return mf_manifest(reduce(_load_mf(args))), 0


def _cmd_mf_knoerrer(args, settings) -> tuple[Manifest, int]:
    names = [part.strip() for part in args.new_vars.split(",") if part.strip()]
    if len(names) != 2:
        raise ParseError("--new-vars needs exactly two names")
    functor = knoerrer_squares if args.squares else knoerrer
    return mf_manifest(functor(_load_mf(args), names[0], names[1])), 0


def _cmd_mf_cone(args, settings) -> tuple[Manifest, int]:
    if args.input is None and args.payload is not None and '"source"' in args.payload:
        phi = morphism_from_document(loads(args.payload, MorphismDocument), _single_ring(args))
    else:
        M = _load_mf(args)
        phi = identity_morphism(M) if args.morphism == "identity" else zero_morphism(M, M)
    return mf_manifest(cone(phi)), 0


def _cmd_mf_hom(args, settings) -> tuple[Manifest, int]:
    if args.input is not None or (args.payload is not None and '"source"' not in args.payload):
        source = target = _load_mf(args)
    elif args.payload is not None:
        request = loads(args.payload, HomRequest)
        ring = _single_ring(args)
        source, target = mf_from_document(request.source, ring), mf_from_document(request.target, ring)
    else:
        raise ParseError("a payload or --input is required")
    bound = args.degree_bound or settings.hom_degree_bound
    cap = _budget(args, settings).degree_cap
    return hom_manifest(source.ring, stable_hom_dimension(source, target, bound, cap)), 0


def _classify_pair(g1: Germ, g2: Germ, budget: Budget, verify: bool) -> Manifest:
    verdict = decide_dg_equivalence(g1, g2, budget)
    verified = None
    if verify:
        verified = verify_verdict(g1, g2, verdict, budget)
        if not verified:
            raise VerificationError(f"{verdict.outcome} verdict failed replay")
    return verdict_manifest(g1, g2, verdict, verified)


def _cmd_classify(args, settings) -> tuple[Manifest, int]:
    budget = _budget(args, settings)
    if args.input is not None:
        g1, g2, verdict = verdict_from_manifest(_read_manifest(args.input))
        if not verify_verdict(g1, g2, verdict, budget):
            raise VerificationError(f"{verdict.outcome} verdict failed replay")
        return verdict_manifest(g1, g2, verdict, True), 0
    if len(args.vars) != 2 or len(args.germs) != 2:
        raise ParseError("classify needs two --vars declarations and two germs")
    g1 = Germ(parse_poly(args.germs[0], RingContext.of(args.vars[0])))
    g2 = Germ(parse_poly(args.germs[1], RingContext.of(args.vars[1])))
    return _classify_pair(g1, g2, budget, args.verify), 0


HANDLERS: dict[str, Callable] = {
    "invariants": _cmd_invariants,
    "tyurina": _cmd_tyurina,
    "mf-validate": _cmd_mf_validate,
    "mf-shift": _cmd_mf_shift,
    "mf-knoerrer": _cmd_mf_knoerrer,
    "mf-reduce": _cmd_mf_reduce,
    "mf-cone": _cmd_mf_cone,
    "mf-hom": _cmd_mf_hom,
    "classify": _cmd_classify,
}


# --- batch mode ---------------------------------------------------------------------


def _batch_line(number: int, line: str, budget: Budget, verify: bool) -> tuple[int, str]:
    try:
        pair = loads(line, BatchPair)
        g1, g2 = germ_from_document(pair.left), germ_from_document(pair.right)
        return 0, dumps(_classify_pair(g1, g2, budget, verify), indent=None)
    except SingcatError as exc:
        document = ErrorDocument(error=str(exc), exit_code=exc.exit_code, line=number)
        return exc.exit_code, dumps(document, indent=None)
    except Exception as exc:
        logger.error("Internal error in batch line", extra={"line": number, "error": exc.__class__.__name__})
        document = ErrorDocument(error=f"internal error: {exc.__class__.__name__}", exit_code=1, line=number)
        return 1, dumps(document, indent=None)


async def run_batch(lines: Sequence[str], budget: Budget, concurrency: int, verify: bool = False) -> list[tuple[int, str]]:
    """Decide every non-blank line concurrently; results keep input order."""

    semaphore = asyncio.Semaphore(concurrency)

    async def decide(number: int, line: str) -> tuple[int, str]:
        async with semaphore:
            return await asyncio.to_thread(_batch_line, number, line, budget, verify)

    return await asyncio.gather(
        *(decide(number, line) for number, line in enumerate(lines, start=1) if line.strip())
    )


# --- entry points -------------------------------------------------------------------


def run(
    argv: Optional[Sequence[str]] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Run one command and return its exit code."""

    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    settings = get_settings()
    logger = setup_logging(
        level=settings.log_level,
        log_directory=settings.log_directory,
        environment=settings.environment,
    )

    parser = build_parser()
    try:
        args, extras = parser.parse_known_args(argv)
        if extras:
            # a germ may follow each --vars declaration; argparse only fills "germs" once
            if args.command != "classify" or any(item.startswith("--") for item in extras):
                parser.error(f"unrecognized arguments: {' '.join(extras)}")
            args.germs = [*args.germs, *extras]
    except SystemExit as exc:
        return 0 if exc.code == 0 else ParseError.exit_code

    started = time.perf_counter()
    try:
        if args.command == "classify" and args.batch:
            results = asyncio.run(
                run_batch(stdin.read().splitlines(), _budget(args, settings), settings.batch_concurrency, args.verify)
            )
            for _, text in results:
                stdout.write(text + "\n")
            exit_code = next((code for code, _ in results if code), 0)
        else:
            manifest, exit_code = HANDLERS[args.command](args, settings)
            stdout.write(dumps(manifest) + "\n")
    except SingcatError as exc:
        logger.warning(
            "Command failed",
            extra={"command": args.command, "error": exc.__class__.__name__, "exit_code": exc.exit_code},
        )
        stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except Exception as exc:
        logger.error(
            "Internal error",
            extra={"command": args.command, "error": exc.__class__.__name__, "exit_code": 1},
        )
        stderr.write(f"internal error: {exc.__class__.__name__}\n")
        return 1

    logger.info(
        "Command finished",
        extra={
            "command": args.command,
            "exit_code": exit_code,
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
        },
    )
    return exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":  # pragma: no cover
    main()

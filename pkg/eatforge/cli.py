"""Command-line entry point.

Machine output is JSON on stdout (or `--out`); a short human summary goes to
stderr through logging.

Exit codes:
    0  success
    1  validation failure (diagnostics, failed claims, broken certificates)
    2  I/O error (missing or unreadable input)
    3  element cap exceeded (a partial dump is still written)
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING

import orjson

from eatforge import config, jsonio
from eatforge.chase import (
    Generators,
    dump_state,
    enumerate_class,
    free_model_of_chain,
    saturate,
)
from eatforge.effective import (
    branch_of_total_graph,
    family_from_json,
    graph_from_json,
    section_report,
)
from eatforge.errors import (
    CategoryLawError,
    CertificateViolationError,
    EatforgeError,
    ResourceLimitError,
    TheoryParseError,
)
from eatforge.fincat import (
    VerificationReport,
    category_from_json,
    run_default_verification,
    verify_categories,
)
from eatforge.std_theories import (
    monoid_chain,
    pointed_involution_chain,
    r_topos_chain,
)
from eatforge.theory import (
    Diagnostic,
    decode_source,
    format_term,
    parse_theory,
    validate,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    from eatforge.jsonio import JSONValue
    from eatforge.theory import TheoryChain, TheoryPresentation

log = logging.getLogger("eatforge.cli")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2
EXIT_CAP = 3

_CHAIN_GENERATORS = {"involution": "X:c", "commutative": "M:a,b"}
_BUILTIN_CORPORA = ("default", "full")


class _Failure(Exception):
    """Abort a subcommand with an exit code and an optional JSON payload."""

    def __init__(self, code: int, payload: JSONValue = None) -> None:
        """Keep the exit code and the payload to emit."""
        super().__init__(code)
        self.code = code
        self.payload = payload


# =============================================================================
# HELPERS
# =============================================================================


def _setup_logging(*, debug: bool = False) -> None:
    """Configure logging for the CLI.

    Args:
        debug: Enable debug-level logging if True.

    """
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(
        level=level,
        format="[%(name)s] %(levelname)s: %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _emit(cfg: config.RunConfig, data: JSONValue) -> None:
    text = jsonio.dumps(data) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text, encoding="utf-8")
        log.info("wrote %s", cfg.out)


def _read_theory(path: Path) -> TheoryPresentation:
    """Parse and validate a theory file.

    Raises:
        _Failure: With the diagnostics when parsing or validation fails.

    """
    try:
        theory = parse_theory(decode_source(path.read_bytes()))
    except TheoryParseError as exc:
        diagnostic = Diagnostic("error", exc.message, exc.line, exc.col)
        raise _Failure(EXIT_INVALID, {"diagnostics": [diagnostic.to_json()]}) from exc
    diagnostics = validate(theory)
    if any(d.severity == "error" for d in diagnostics):
        payload: JSONValue = {"diagnostics": [d.to_json() for d in diagnostics]}
        raise _Failure(EXIT_INVALID, payload)
    return theory


def _generators(cfg: config.RunConfig, theory: TheoryPresentation) -> Generators:
    facts = [f for f in cfg.extra.get("facts", "").split("\n") if f.strip()]
    return Generators.from_spec(theory, cfg.extra.get("generators", ""), facts)


# =============================================================================
# SUBCOMMANDS
# =============================================================================


def cmd_check(cfg: config.RunConfig) -> JSONValue:
    """Parse and validate one theory file."""
    (path,) = cfg.inputs
    theory = _read_theory(path)
    log.info("check: %s is valid (%s axioms)", path, len(theory.axioms))
    return {"theory": theory.name, "diagnostics": []}


def cmd_saturate(cfg: config.RunConfig) -> JSONValue:
    """Saturate a theory on generators and dump the state."""
    (path,) = cfg.inputs
    theory = _read_theory(path)
    state = saturate(theory, _generators(cfg, theory), cfg.rounds, cap=cfg.cap)
    counts = state.class_counts()
    log.info(
        "saturate: stage %s, %s classes%s",
        state.stage,
        sum(counts.values()),
        " (saturated)" if state.saturated else "",
    )
    return dump_state(state)


def cmd_enumerate(cfg: config.RunConfig) -> JSONValue:
    """Gödel table of one sort after saturation."""
    (path,) = cfg.inputs
    theory = _read_theory(path)
    sort = cfg.extra.get("sort", "")
    if sort not in theory.sort_names:
        msg = f"unknown sort {sort!r}"
        raise EatforgeError(msg)
    state = saturate(theory, _generators(cfg, theory), cfg.rounds, cap=cfg.cap)
    available = len(state.classes(sort))
    limit = int(cfg.extra.get("count") or available)
    table: list[JSONValue] = []
    for index in range(min(limit, available)):
        element = enumerate_class(state, sort, index)
        table.append(
            {
                "index": index,
                "element": element,
                "term": format_term(state.term_of(element)),
            }
        )
    log.info("enumerate: %s of %s classes of %s", len(table), available, sort)
    return {"sort": sort, "stage": state.stage, "classes": available, "table": table}


def _load_corpus(corpus: str, report: VerificationReport) -> VerificationReport:
    data = jsonio.load_path(Path(corpus))
    documents = data.get("categories", []) if isinstance(data, dict) else data
    if not isinstance(documents, list):
        msg = f"{corpus}: expected a list of categories"
        raise EatforgeError(msg)
    categories = []
    for position, document in enumerate(documents):
        try:
            categories.append(category_from_json(document, f"category{position}"))
        except CategoryLawError as exc:
            report.errors.append(str(exc))
    return verify_categories(categories, report)


def cmd_verify(cfg: config.RunConfig) -> JSONValue:
    """Run the finite-category claim checks over a corpus."""
    corpus = cfg.extra.get("corpus", "default")
    if corpus == "default":
        report = run_default_verification()
    elif corpus == "full":
        report = run_default_verification(max_source=4)
    else:
        report = _load_corpus(corpus, VerificationReport())
    log.info(
        "verify: %s instances, %s",
        report.instances,
        "all claims pass" if report.passed else "FAILURES",
    )
    result = report.to_json()
    if not report.passed:
        raise _Failure(EXIT_INVALID, result)
    return result


def cmd_witness(cfg: config.RunConfig) -> JSONValue:
    """Extract a minimal section or a branch from a bundle."""
    (path,) = cfg.inputs
    data = jsonio.load_path(path)
    mode = cfg.extra.get("mode", "section")
    override = cfg.extra.get("bound")
    if mode == "section":
        bundle = family_from_json(data)
        if override:
            bundle = replace(bundle, fiber_bound=int(override))
        section = section_report(bundle)
        missing = sum(1 for v in section if isinstance(v, dict))
        log.info("witness: %s section values, %s bound-exceeded", len(section), missing)
        return {"mode": mode, "section": section}
    graph_bundle = graph_from_json(data)
    graph = graph_bundle.graph
    if override:
        graph = replace(graph, edge_bound=int(override))
    try:
        branch = branch_of_total_graph(graph, graph_bundle.steps)
    except CertificateViolationError as exc:
        payload: JSONValue = {
            "mode": mode,
            "error": str(exc),
            "node": exc.node,
            "step": exc.step,
        }
        raise _Failure(EXIT_INVALID, payload) from exc
    log.info("witness: branch of %s steps", len(branch.edges))
    return {"mode": mode, **branch.to_json()}


def _chain(name: str) -> TheoryChain:
    if name == "involution":
        return pointed_involution_chain()
    if name == "commutative":
        return monoid_chain()
    kind, _, r_max = name.partition(":")
    if kind == "topos" and r_max.isdigit():
        return r_topos_chain(int(r_max))
    msg = f"unknown chain {name!r}"
    raise EatforgeError(msg)


def cmd_chain(cfg: config.RunConfig) -> JSONValue:
    """Compare a built-in chain's union model with its stage models."""
    name = cfg.extra.get("chain", "involution")
    chain = _chain(name)
    groups = cfg.extra.get("generators") or _CHAIN_GENERATORS.get(name, "")
    generators = Generators.from_spec(chain.union(), groups)
    report = free_model_of_chain(chain, generators, cfg.rounds, cap=cfg.cap)
    log.info("chain %s: %s", name, "reducts match" if report.match else "MISMATCH")
    result = report.to_json()
    if not report.match:
        raise _Failure(EXIT_INVALID, result)
    return result


_COMMANDS: dict[str, Callable[[config.RunConfig], JSONValue]] = {
    "check": cmd_check,
    "saturate": cmd_saturate,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "witness": cmd_witness,
    "chain": cmd_chain,
}


# =============================================================================
# ARGUMENTS
# =============================================================================


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rounds", type=int, help="Chase rounds (default: 8)")
    common.add_argument("--cap", type=int, help="Element cap (default: 10**6)")
    common.add_argument("--bound", type=int, help="Search bound (default: 1000)")
    common.add_argument("--out", type=Path, help="Write JSON here instead of stdout")
    common.add_argument("--format", choices=["json"], default="json")
    common.add_argument(
        "--debug", "-d", action="store_true", help="Enable debug logging"
    )

    parser = argparse.ArgumentParser(
        prog="eatforge", description="Essentially algebraic theory workbench"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    check = sub.add_parser("check", parents=[common], help="Validate a theory")
    check.add_argument("theory", type=Path)

    for name, text in (
        ("saturate", "Saturate and dump the state"),
        ("enumerate", "Gödel table for one sort"),
    ):
        cmd = sub.add_parser(name, parents=[common], help=text)
        cmd.add_argument("theory", type=Path)
        cmd.add_argument("--generators", default="", help="Sort:a,b;Sort2:c")
        cmd.add_argument(
            "--fact", action="append", default=[], help="Ground atom, repeatable"
        )
        if name == "enumerate":
            cmd.add_argument("--sort", required=True)
            cmd.add_argument("--count", type=int)

    verify = sub.add_parser("verify", parents=[common], help="Finite-category claims")
    verify.add_argument(
        "--corpus",
        default="default",
        help="default, full (cospans from posets up to 4) or a JSON path",
    )

    witness = sub.add_parser("witness", parents=[common], help="Extract witnesses")
    witness.add_argument("bundle", type=Path)
    witness.add_argument("--mode", choices=["section", "branch"], default="section")

    chain = sub.add_parser("chain", parents=[common], help="Chain compactness check")
    chain.add_argument(
        "name",
        nargs="?",
        default="involution",
        help="involution, commutative or topos:<rMax>",
    )
    chain.add_argument("--generators", default="")
    return parser


def _run_config(args: argparse.Namespace) -> config.RunConfig:
    inputs: list[Path] = [
        getattr(args, key) for key in ("theory", "bundle") if hasattr(args, key)
    ]
    extra: dict[str, str] = {}
    for key in ("generators", "sort", "mode", "corpus"):
        if getattr(args, key, None):
            extra[key] = str(getattr(args, key))
    if getattr(args, "fact", None):
        extra["facts"] = "\n".join(args.fact)
    if getattr(args, "count", None) is not None:
        extra["count"] = str(args.count)
    if getattr(args, "name", None):
        extra["chain"] = args.name
    if args.bound is not None:
        extra["bound"] = str(args.bound)
    corpus = extra.get("corpus", "default")
    if args.subcommand == "verify" and corpus not in _BUILTIN_CORPORA:
        inputs.append(Path(corpus))
    return config.RunConfig(
        subcommand=args.subcommand,
        inputs=tuple(inputs),
        rounds=args.rounds if args.rounds is not None else config.default_rounds(),
        bound=args.bound if args.bound is not None else config.default_bound(),
        cap=args.cap if args.cap is not None else config.default_cap(),
        out=args.out,
        debug=args.debug,
        extra=extra,
    )


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand.

    Args:
        argv: Command line arguments (defaults to sys.argv[1:]).

    Returns:
        Process exit code.

    """
    args = _parser().parse_args(argv)
    _setup_logging(debug=args.debug)
    config.load_environment()
    try:
        cfg = _run_config(args)
    except ValueError as exc:
        log.error("%s", exc)  # noqa: TRY400
        return EXIT_INVALID
    missing = cfg.missing_inputs()
    if missing:
        log.error("input not found: %s", ", ".join(map(str, missing)))
        return EXIT_IO
    log.debug("config %s", cfg)
    code, payload = EXIT_OK, None
    try:
        payload = _COMMANDS[cfg.subcommand](cfg)
    except _Failure as exc:
        code, payload = exc.code, exc.payload
    except ResourceLimitError as exc:
        log.error("%s", exc)  # noqa: TRY400
        code, payload = EXIT_CAP, dump_state(exc.partial)
    except (OSError, orjson.JSONDecodeError) as exc:
        log.error("%s", exc)  # noqa: TRY400
        return EXIT_IO
    except EatforgeError as exc:
        log.error("%s", exc)  # noqa: TRY400
        code, payload = EXIT_INVALID, {"error": str(exc)}
    if payload is not None:
        _emit(cfg, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())

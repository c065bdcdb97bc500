"""Command-line client for the analysis service.

Parses a tuple file, builds the same request models the HTTP API accepts,
and either calls the shared handlers in-process (default) or posts to a
running server (``--server``).  Exit codes: 0 success, 1 parse/usage,
2 domain/precondition failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .errors import (
    DomainError,
    NumericalFailureError,
    OsrkitError,
    TupleFileError,
)
from .service import handlers
from .service.schemas import (
    CertifyRequest,
    CommonOptions,
    DynamicsRequest,
    JsrRequest,
    OsrRequest,
    SymliftRequest,
    TupleDocument,
)
from .tuplefile import load_tuple_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NUMERICAL = 3

_ERROR_KIND_EXITS = {"parse": EXIT_USAGE, "domain": EXIT_DOMAIN, "numerical": EXIT_NUMERICAL}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the exit-code contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _str_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip() != ""]


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("file", help="tuple file (JSON document)")
    p.add_argument("--tol", type=float, default=None,
                   help="eigenvalue clustering tolerance (default 1e-8)")
    p.add_argument("--q-max", type=int, default=None, dest="q_max",
                   help="maximal phase-group order to enumerate (default 24)")
    p.add_argument("--budget-words", type=int, default=None,
                   help="word enumeration budget d^k (default 10^6)")
    p.add_argument("--budget-dim", type=int, default=None,
                   help="Kronecker power size budget n^k (default 4096)")
    p.add_argument("--budget-sym", type=int, default=None,
                   help="symmetric lift dimension budget (default 5000)")
    p.add_argument("--seed", type=int, default=None,
                   help="echoed into the report for reproducibility")
    p.add_argument("--format", choices=("human", "structured"), default="human")
    p.add_argument("--server", default=None,
                   help="base URL of a running service; default runs in-process")
    p.add_argument("-o", "--output", default=None,
                   help="write the report to this path (atomically)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="osrkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_osr = sub.add_parser("osr", help="outer spectral radius and maximal spectrum")
    _add_common(p_osr)
    p_osr.add_argument("--k", type=_int_list, default=[1, 2, 4, 8],
                       help="Gelfand sequence indices, comma separated")

    p_jsr = sub.add_parser("jsr", help="joint spectral radius brackets")
    _add_common(p_jsr)
    p_jsr.add_argument("--k", type=_int_list, default=[1, 2],
                       help="lift parameters, comma separated")
    p_jsr.add_argument("--k-max", type=int, default=8, dest="k_max",
                       help="word enumeration depth (default 8)")
    p_jsr.add_argument("--methods", type=_str_list, default=["words", "osr", "kron", "sym"],
                       help="subset of words,osr,kron,sym")

    p_cert = sub.add_parser("certify", help="Lyapunov / similarity certificate")
    _add_common(p_cert)
    p_cert.add_argument("--target", type=float, default=None,
                        help="certify row norm below this target (default 1)")

    p_dyn = sub.add_parser("dynamics", help="asymptotics of the induced CP map")
    _add_common(p_dyn)

    p_sym = sub.add_parser("symlift", help="symmetric lift bracket with basis dump")
    _add_common(p_sym)
    p_sym.add_argument("--k", type=_int_list, default=[1],
                       help="half-degrees (degree 2k lifted), comma separated")
    p_sym.add_argument("--no-basis", action="store_true", help="omit the monomial basis")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _options(args) -> CommonOptions:
    return CommonOptions(
        tol=args.tol,
        q_max=args.q_max,
        budget_words=args.budget_words,
        budget_dim=args.budget_dim,
        budget_sym=args.budget_sym,
        seed=args.seed,
    )


def _build_request(args):
    tf = load_tuple_file(args.file)
    doc = TupleDocument(**tf.canonical_document())
    opts = _options(args)
    if args.command == "osr":
        return OsrRequest(tuple=doc, k=args.k, options=opts), handlers.run_osr
    if args.command == "jsr":
        return (
            JsrRequest(tuple=doc, methods=args.methods, k=args.k,
                       k_max=args.k_max, options=opts),
            handlers.run_jsr,
        )
    if args.command == "certify":
        return CertifyRequest(tuple=doc, target=args.target, options=opts), handlers.run_certify
    if args.command == "dynamics":
        return DynamicsRequest(tuple=doc, options=opts), handlers.run_dynamics
    if args.command == "symlift":
        return (
            SymliftRequest(tuple=doc, k=args.k, dump_basis=not args.no_basis,
                           options=opts),
            handlers.run_symlift,
        )
    raise DomainError(f"unknown command {args.command}")


def _post_remote(server: str, command: str, request) -> dict:
    import httpx

    url = server.rstrip("/") + f"/v1/{command}"
    resp = httpx.post(url, json=request.model_dump(by_alias=True), timeout=600.0)
    if resp.status_code == 200:
        return resp.json()
    body = None
    try:
        body = resp.json()
        kind = body.get("error", {}).get("kind", "domain")
        message = body.get("error", {}).get("message", resp.text)
    except Exception:
        kind, message = "domain", resp.text
    if resp.status_code == 422 and not (isinstance(body, dict) and "error" in body):
        # FastAPI request-validation errors carry a "detail" payload
        kind, message = "parse", resp.text
    print(f"error ({kind}): {message}", file=sys.stderr)
    raise SystemExit(_ERROR_KIND_EXITS.get(kind, EXIT_DOMAIN))


def _fmt_value(v, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(v, dict):
        lines = []
        for key, val in v.items():
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(_fmt_value(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
        return "\n".join(lines)
    if isinstance(v, list):
        if v and all(isinstance(e, (int, float)) for e in v):
            return pad + "[" + ", ".join(_scalar(e) for e in v) + "]"
        if v and all(
            isinstance(e, dict)
            and all(not isinstance(val, (dict, list)) for val in e.values())
            for e in v
        ):
            return "\n".join(
                pad + "- " + ", ".join(f"{k}={_scalar(val)}" for k, val in e.items())
                for e in v
            )
        return "\n".join(
            _fmt_value(e, indent) if isinstance(e, (dict, list))
            else f"{pad}- {_scalar(e)}"
            for e in v
        )
    return f"{pad}{_scalar(v)}"


def _scalar(v) -> str:
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _render_human(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    inp = report["input"]
    lines.append(
        f"input: n={inp['n']} d={inp['d']}"
        + (f" name={inp['name']!r}" if inp.get("name") else "")
    )
    lines.append(f"digest: {inp['digest']}")
    if report["warnings"]:
        lines.append("warnings:")
        for w in report["warnings"]:
            lines.append(f"  ! {w}")
    lines.append("results:")
    lines.append(_fmt_value(report["results"], 1))
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".osrkit-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        os.unlink(tmp)
        raise


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        try:
            import uvicorn
        except ImportError:
            print("serving requires uvicorn (pip install uvicorn)", file=sys.stderr)
            return EXIT_USAGE
        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        request, handler = _build_request(args)
        if args.server:
            report_doc = _post_remote(args.server, args.command, request)
        else:
            report_doc = handler(request).model_dump()
    except TupleFileError as exc:
        print(f"error (parse): {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailureError as exc:
        print(f"error (numerical): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        print(f"error (domain): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OsrkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if args.format == "structured":
        text = json.dumps(report_doc, indent=2, sort_keys=True) + "\n"
    else:
        text = _render_human(report_doc)
    _emit(text, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

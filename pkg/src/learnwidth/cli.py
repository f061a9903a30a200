"""Command-line front end with stable exit codes for scripting.

Exit codes: 0 positive answer, 1 negative answer, 2 undecided near the
promise boundary, 64 usage errors, 65 unreadable or malformed input files.
All file formats use 1-based indices.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass


from .clique import GraphParseError, gap_parameters, load_graph, normalized_mu
from .conic import PrecisionLimitError
from .incoherence import (
    DEFAULT_CAP,
    Certificate,
    EnumerationCapExceeded,
    caratheodory_reduce,
    distance_to_Ik,
    factor_width,
    low_rank_membership,
    rank_one_vectors,
    subset_decomposition,
    verify_certificate,
)
from .learnability import (
    LearnVerdict,
    default_delta,
    fixture_states,
    is_k_learnable,
    learning_width,
    states_to_gram,
    verify_povm,
)
from .matrices import HermitianMatrix, StateList

EXIT_OK = 0
EXIT_NO = 1
EXIT_BOUNDARY = 2
EXIT_USAGE = 64
EXIT_DATA = 65


@dataclass
class CliConfig:
    delta: float | None
    eps: float
    method: str
    output: str
    seed: int | None
    cap: int


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(ValueError):
    pass


class DataError(ValueError):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path} is not valid JSON: {exc}") from exc


def _load_states(path: str) -> StateList:
    data = _read_json(path)
    try:
        return StateList.from_json_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise DataError(f"{path} is not a valid state list: {exc}") from exc


def _load_matrix(path: str) -> HermitianMatrix:
    data = _read_json(path)
    try:
        return HermitianMatrix.from_json_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise DataError(f"{path} is not a valid Hermitian matrix: {exc}") from exc


def _dump_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=1)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _emit(config: CliConfig, human: str, payload: dict) -> None:
    if config.output == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _config(args) -> CliConfig:
    cap = args.cap
    if cap is None:
        cap = int(os.environ.get("LEARNWIDTH_CAP", DEFAULT_CAP))
    return CliConfig(delta=args.delta, eps=args.eps, method=args.method,
                     output=args.output, seed=args.seed, cap=cap)


def _delta_for(config: CliConfig, states: StateList) -> float:
    return config.delta if config.delta is not None else default_delta(states)


# ---------------------------------------------------------------------------
# subcommands


def cmd_learnable(args) -> int:
    config = _config(args)
    states = _load_states(args.states)
    if not 1 <= args.k <= states.n:
        raise UsageError(f"k must lie in 1..{states.n}")
    delta = _delta_for(config, states)
    report = is_k_learnable(states, args.k, delta, cap=config.cap)
    payload = {
        "verdict": report.verdict.value,
        "k": args.k,
        "delta": delta,
        "max_violation": None if math.isnan(report.max_violation) else report.max_violation,
    }
    human = f"{report.verdict.value} (k={args.k}, delta={delta:.3e})"
    if report.povm is not None:
        human += f"; extracted POVM max violation {report.max_violation:.3e}"
    _emit(config, human, payload)
    if report.verdict is LearnVerdict.LEARNABLE:
        return EXIT_OK
    if report.verdict is LearnVerdict.NOT_LEARNABLE:
        return EXIT_NO
    return EXIT_BOUNDARY


def cmd_width(args) -> int:
    config = _config(args)
    data = _read_json(args.input)
    method = config.method if config.method in ("SUBSET", "LOWRANK") else "AUTO"
    if "states" in data:
        states = _load_states(args.input)
        delta = _delta_for(config, states)
        try:
            result = learning_width(states, delta, cap=config.cap)
        except EnumerationCapExceeded:
            # the width equals the factor width of Gram/n, whose rank-based
            # membership path carries no subset cap
            gram = states_to_gram(states)
            result = factor_width(gram.entries / states.n, eps=config.eps,
                                  cap=config.cap, method=method)
    elif "entries" in data:
        matrix = _load_matrix(args.input)
        result = factor_width(matrix, eps=config.eps, cap=config.cap, method=method)
    else:
        raise DataError(f"{args.input} is neither a state list nor a matrix")
    if isinstance(result, tuple):
        _emit(config, f"[{result[0]}, {result[1]}]",
              {"width_interval": [result[0], result[1]]})
        return EXIT_BOUNDARY
    _emit(config, str(result), {"width": int(result)})
    return EXIT_OK


def cmd_certificate(args) -> int:
    config = _config(args)
    matrix = _load_matrix(args.matrix)
    n = matrix.dim
    if not 1 <= args.k <= n:
        raise UsageError(f"k must lie in 1..{n}")
    eps = config.eps
    if matrix.trace() > 1.0 + eps:
        print(f"matrix trace {matrix.trace():.6f} exceeds 1; not a member of the "
              "trace-bounded k-incoherent set", file=sys.stderr)
        return EXIT_NO
    if config.method == "LOWRANK" or math.comb(n, args.k) > config.cap:
        decomposition = low_rank_membership(matrix, args.k, eps)
    else:
        decomposition = subset_decomposition(matrix, args.k, eps, cap=config.cap)
    if decomposition is None:
        distance = distance_to_Ik(matrix, args.k, max(eps, 1e-9), cap=config.cap)
        print(f"not {args.k}-incoherent: distance estimate {distance:.6e}",
              file=sys.stderr)
        return EXIT_NO
    certificate = caratheodory_reduce(rank_one_vectors(decomposition), k=args.k)
    out = args.out or (os.path.splitext(args.matrix)[0] + f".cert{args.k}.json")
    _dump_json(certificate.to_json_dict(), out)
    check = verify_certificate(matrix, certificate, tol=1e-7)
    _emit(config,
          f"wrote {len(certificate)} vectors to {out}; self-check "
          f"{'passed' if check.ok else 'FAILED'}",
          {"vectors": len(certificate), "file": out, "self_check": bool(check.ok)})
    return EXIT_OK if check.ok else EXIT_NO


def cmd_verify(args) -> int:
    config = _config(args)
    matrix = _load_matrix(args.matrix)
    data = _read_json(args.certificate)
    try:
        certificate = Certificate.from_json_dict(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise DataError(f"{args.certificate} is not a valid certificate: {exc}") from exc
    check = verify_certificate(matrix, certificate, tol=args.tol)
    payload = {"valid": bool(check.ok), "clause": check.clause, "detail": check.detail}
    _emit(config, "PASS" if check.ok else f"FAIL ({check.clause}): {check.detail}", payload)
    return EXIT_OK if check.ok else EXIT_NO


def cmd_clique(args) -> int:
    config = _config(args)
    try:
        with open(args.graph, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {args.graph}: {exc}") from exc
    graph = load_graph(text)
    if args.k < 2:
        raise UsageError("the clique reduction requires k >= 2")
    if args.k > graph.n:
        raise UsageError(f"k={args.k} exceeds the vertex count {graph.n}")
    method = "SDP" if config.method == "SDP" else "ORACLE"
    params = gap_parameters(graph, args.k)
    value = normalized_mu(graph, args.k, method=method, cap=config.cap)
    found = value >= params.gamma
    payload = {"k": args.k, "mu": value, "gamma": params.gamma,
               "delta": params.delta, "clique": bool(found)}
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK if found else EXIT_NO


def cmd_povm(args) -> int:
    config = _config(args)
    states = _load_states(args.states)
    if not 1 <= args.k <= states.n:
        raise UsageError(f"k must lie in 1..{states.n}")
    delta = _delta_for(config, states)
    report = is_k_learnable(states, args.k, delta, cap=config.cap)
    if report.verdict is LearnVerdict.NOT_LEARNABLE:
        print(f"not {args.k}-learnable; no POVM written", file=sys.stderr)
        return EXIT_NO
    if report.verdict is LearnVerdict.BOUNDARY:
        print("verdict is BOUNDARY at this delta; no POVM written", file=sys.stderr)
        return EXIT_BOUNDARY
    if report.povm is None:
        print("learnable, but POVM extraction did not certify; no POVM written",
              file=sys.stderr)
        return EXIT_BOUNDARY
    out = args.out or (os.path.splitext(args.states)[0] + f".povm{args.k}.json")
    _dump_json(report.povm.to_json_dict(), out)
    check = verify_povm(states, report.povm, tol=1e-6)
    _emit(config,
          f"wrote POVM with {len(report.povm)} outcomes to {out}; "
          f"max zero-error violation {check.max_violation:.3e}",
          {"file": out, "outcomes": len(report.povm),
           "max_violation": check.max_violation})
    return EXIT_OK


def cmd_fixtures(args) -> int:
    config = _config(args)
    try:
        states = fixture_states(args.name, k=args.k, n=args.n, d=args.d,
                                seed=config.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _dump_json(states.to_json_dict(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(prog="learnwidth",
                     description="Zero-error state classification and factor "
                                 "width of PSD matrices")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=float, default=None,
                        help="decision accuracy (default scales with the input)")
    common.add_argument("--eps", type=float, default=1e-6,
                        help="feasibility/SDP residual tolerance")
    common.add_argument("--method", default="AUTO",
                        choices=["AUTO", "SUBSET", "LOWRANK", "ORACLE", "SDP"],
                        help="algorithm selection where applicable")
    common.add_argument("--output", default="human", choices=["human", "json"])
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--cap", type=int, default=None,
                        help="subset enumeration cap (env LEARNWIDTH_CAP)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learnable", parents=[common],
                       help="decide k-learnability of a state list")
    p.add_argument("states", help="StateList JSON file")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_learnable)

    p = sub.add_parser("width", parents=[common],
                       help="learning width of states or factor width of a matrix")
    p.add_argument("input", help="StateList or HermitianMatrix JSON file")
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("certificate", parents=[common],
                       help="emit a succinct k-incoherence certificate")
    p.add_argument("matrix", help="HermitianMatrix JSON file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_certificate)

    p = sub.add_parser("verify", parents=[common],
                       help="verify a certificate against a matrix")
    p.add_argument("matrix")
    p.add_argument("certificate")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("clique", parents=[common],
                       help="decide k-clique through the incoherence optimum")
    p.add_argument("graph", help="edge-list file: 'n m' then 'u v' lines")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("povm", parents=[common],
                       help="extract and verify a zero-error POVM")
    p.add_argument("states")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_povm)

    p = sub.add_parser("fixtures", parents=[common],
                       help="emit a named fixture ensemble as JSON")
    p.add_argument("name", help="trine | tetrahedral | repeated_basis | random")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"learnwidth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, GraphParseError) as exc:
        print(f"learnwidth: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EnumerationCapExceeded as exc:
        print(f"learnwidth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionLimitError as exc:
        print(f"learnwidth: error: {exc}", file=sys.stderr)
        return EXIT_BOUNDARY
    except (ValueError, NotImplementedError) as exc:
        print(f"learnwidth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

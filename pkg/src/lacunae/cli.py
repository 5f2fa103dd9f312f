"""Command-line front end.

    lacunae [global options] <verb> ...

Verbs: words, magnus, order, cnd, certify, norm, paley.  Every report embeds
the resolved job configuration.  Exit status: 0 all verdicts pass, 1 some
verdict fails, 2 bad input, 3 undecided order or exceeded budget.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import cnd as cnd_mod
from . import lacunarity, magnus, norms, order, paley
from .errors import (BudgetExceededError, ConvergenceError, LacunarityError, UndecidedOrderError,
                     WordParseError)
from .fourier import FourierElement, _coeff_from_json
from .serialize import dumps, to_plain
from .words import LengthFunction, Word, ball, parse_word

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_UNDECIDED = 0, 1, 2, 3


class InputError(ValueError):
    """Unreadable or schema-violating input."""


@dataclass
class JobConfig:
    rank: int = 2
    length: str = "word"
    degree: int | None = None
    max_degree: int | None = None
    radius: int | None = None
    tgrid: str = "default"
    tol: float | None = None
    steps: int = norms.DEFAULT_STEPS
    seed: int = 0
    format: str = "json"
    jobs: int = 1

    def psi(self) -> LengthFunction:
        return LengthFunction.from_spec(self.length)

    def t_grid(self):
        return parse_tgrid(self.tgrid)


def parse_tgrid(spec):
    """``default``, ``t1,t2,...`` or ``geom:lo:hi:n``."""
    if spec is None or spec == "default":
        return None
    if isinstance(spec, (list, tuple)):
        return [float(t) for t in spec]
    if spec.startswith("geom:"):
        try:
            lo, hi, n = spec[5:].split(":")
            return [float(t) for t in np.geomspace(float(lo), float(hi), int(n))]
        except ValueError:
            raise InputError(f"bad t-grid {spec!r}; expected geom:lo:hi:n") from None
    try:
        return [float(t) for t in spec.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad t-grid {spec!r}") from None


# ---------------------------------------------------------------------------
# input helpers


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not text.strip():
        raise InputError(f"schema error: {path} is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def read_words(data, rank):
    if isinstance(data, dict):
        if "words" not in data:
            raise InputError("schema error: expected a list of words or {\"words\": [...]}")
        rank = int(data.get("rank", rank))
        data = data["words"]
    if not isinstance(data, list):
        raise InputError("schema error: expected a list of words")
    return [parse_word(w, rank) for w in data], rank


def read_sequences(data, rank):
    """One sequence, or {"sequences": [[...], ...]} for batch certification."""
    if isinstance(data, dict) and "sequences" in data:
        rank = int(data.get("rank", rank))
        seqs = data["sequences"]
        if not isinstance(seqs, list):
            raise InputError("schema error: 'sequences' must be a list")
        return [read_words(s, rank)[0] for s in seqs], rank
    words, rank = read_words(data, rank)
    return [words], rank


def read_element(data):
    if not isinstance(data, dict):
        raise InputError("schema error: expected a Fourier element object")
    try:
        return FourierElement.from_json(data)
    except WordParseError:
        raise
    except ValueError as exc:
        raise InputError(f"schema error: {exc}") from None


def read_coefficients(raw, dim):
    return [_coeff_from_json(c, dim) for c in raw]


def read_series(data, cfg):
    """{"rank", "sequence", "coefficients", "dim"?} -> (words, coefficient arrays)."""
    if not isinstance(data, dict) or "sequence" not in data:
        raise InputError("schema error: expected {\"sequence\": [...], \"coefficients\": [...]}")
    rank = int(data.get("rank", cfg.rank))
    seq = [parse_word(w, rank) for w in data["sequence"]]
    raw = data.get("coefficients", [1] * len(seq))
    if len(raw) != len(seq):
        raise InputError("schema error: need one coefficient per sequence term")
    return seq, read_coefficients(raw, int(data.get("dim", 1))), rank


def _status(passed: bool) -> int:
    return EXIT_PASS if passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# verbs; each returns (payload, exit status)


def run_words(args, cfg):
    psi = cfg.psi()
    if args.action == "ball":
        radius = 2 if cfg.radius is None else cfg.radius
        rows = [{"word": str(g), "length": len(g), "psi": psi(g)} for g in ball(cfg.rank, radius)]
        return {"schema": "lacunae.words.ball/1", "radius": radius, "words": rows}, EXIT_PASS
    words = [parse_word(w, cfg.rank) for w in args.words]
    if args.action == "multiply":
        prod = Word.identity(cfg.rank)
        for g in words:
            prod = prod * g
        return {"schema": "lacunae.words.multiply/1", "factors": words, "product": prod,
                "syllables": prod.to_json()}, EXIT_PASS
    rows = [{"word": str(g), "syllables": g.to_json(), "length": len(g), "psi": psi(g),
             "inverse": str(g.inverse())} for g in words]
    return {"schema": "lacunae.words.reduce/1", "words": rows}, EXIT_PASS


def run_magnus(args, cfg):
    rows = []
    for text in args.words:
        g = parse_word(text, cfg.rank)
        row = {"word": str(g), "degree": cfg.degree or magnus.default_degree(g),
               "series": magnus.magnus_embed(g, cfg.degree).to_json(),
               "profile": magnus.j_profile(g)}
        if cfg.rank == 2:
            m = magnus.subgroup_membership(g)
            row["membership"] = {"F0": m.in_F0, "F00": m.in_F00}
            row["transference"] = list(magnus.transference_sides(g))
        rows.append(row)
    return {"schema": "lacunae.magnus/1", "words": rows}, EXIT_PASS


def run_order(args, cfg):
    if args.action == "compare":
        if len(args.items) != 2:
            raise InputError("order compare needs two words")
        g, h = (parse_word(w, cfg.rank) for w in args.items)
        v = order.order_compare(g, h, cfg.max_degree)
        payload = {"schema": "lacunae.order.compare/1", "g": g, "h": h, **v.to_json(cfg.rank)}
        return payload, EXIT_PASS if v.decided else EXIT_UNDECIDED
    if len(args.items) != 1:
        raise InputError(f"order {args.action} needs one input file")
    data = load_json(args.items[0])
    if args.action == "sort":
        words, _ = read_words(data, cfg.rank)
        ordered = order.sort_words(words, cfg.max_degree)
        return {"schema": "lacunae.order.sort/1", "sorted": ordered}, EXIT_PASS
    x = read_element(data)
    plus, minus = order.positive_part_split(x, cfg.max_degree)
    return {"schema": "lacunae.order.split/1", "plus": plus, "minus": minus}, EXIT_PASS


def run_cnd(args, cfg):
    psi = cfg.psi()
    if args.words:
        words, _ = read_words(load_json(args.words), cfg.rank)
    else:
        words = ball(cfg.rank, 2 if cfg.radius is None else cfg.radius)
    report = cnd_mod.cnd_gram_test(psi, words, cfg.tol)
    payload = {"schema": "lacunae.cnd/1", "length": psi.name, "gram": report}
    ok = report.passed
    if args.schoenberg:
        sch = cnd_mod.schoenberg_test(psi, words, parse_tgrid(args.schoenberg), cfg.tol)
        payload["schoenberg"] = sch
        ok = ok and sch.passed
    return payload, _status(ok)


def _certify_one(kind, words, length, max_degree):
    if kind == "psi":
        cert = lacunarity.psi_lacunary_delta(LengthFunction.from_spec(length), words)
    elif kind == "rudin":
        cert = lacunarity.rudin_lacunarity_estimate(words, max_degree=max_degree)
    else:
        cert = lacunarity.prop51_check(words)
    return to_plain(cert)


def run_certify(args, cfg):
    if not args.words:
        raise InputError("certify needs --words <file>")
    seqs = []
    for path in args.words:
        found, _ = read_sequences(load_json(path), cfg.rank)
        seqs.extend(found)
    if cfg.jobs > 1 and len(seqs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            certs = list(pool.map(_certify_one, [args.kind] * len(seqs), seqs,
                                  [cfg.length] * len(seqs), [cfg.max_degree] * len(seqs)))
    else:
        certs = [_certify_one(args.kind, s, cfg.length, cfg.max_degree) for s in seqs]
    ok = all(c["passed"] for c in certs)
    body = certs[0] if len(certs) == 1 else {"certificates": certs}
    return {"schema": f"lacunae.certify.{args.kind}/1", **body}, _status(ok)


def run_norm(args, cfg):
    x = read_element(load_json(args.input))
    psi = cfg.psi()
    if args.kind == "op":
        radii = args.ladder or [cfg.radius if cfg.radius is not None else norms.default_radius(x.rank, x.dim)]
        ladder = norms.norm_ladder(x, radii, tol=cfg.tol or 1e-6, seed=cfg.seed)
        return {"schema": "lacunae.norm.op/1", "value": ladder[-1].value, "ladder": ladder}, EXIT_PASS
    if args.kind == "bmo":
        est = norms.bmo_norm_estimate(x, psi, cfg.t_grid(), cfg.radius, tol=cfg.tol or 1e-6, seed=cfg.seed)
        return {"schema": "lacunae.norm.bmo/1", **est.to_json()}, EXIT_PASS
    est = norms.h1_norm_estimate(x, psi, cfg.radius, cfg.steps)
    return {"schema": "lacunae.norm.h1/1", **est.to_json()}, EXIT_PASS


def run_paley(args, cfg):
    data = load_json(args.input)
    if args.kind in ("theorem1", "lambda4"):
        seq, coeffs, rank = read_series(data, cfg)
        psi = cfg.psi()
        try:
            if args.kind == "theorem1":
                rep = paley.theorem1_check(seq, coeffs, psi, cfg.radius, cfg.t_grid(), cfg.steps,
                                           cfg.seed, rank=rank)
            else:
                rep = paley.lambda4_check(seq, coeffs, psi)
        except LacunarityError as exc:
            return {"schema": f"lacunae.paley.{args.kind}/1", "lacunarity": exc.certificate,
                    "error": str(exc)}, EXIT_FAIL
        return rep.to_json(), _status(rep.passed)
    if args.kind == "split":
        if not isinstance(data, dict) or not {"y", "z", "targets"} <= set(data):
            raise InputError("schema error: split input needs 'y', 'z' and 'targets'")
        y, z = read_element(data["y"]), read_element(data["z"])
        targets = [parse_word(w, y.rank) for w in data["targets"]]
        rep = paley.paley_split(y, z, targets, cfg.max_degree)
        return rep.to_json(), _status(rep.passed)
    x = read_element(data)
    dec = paley.jab_decomposition(x)
    payload = dec.to_json()
    if args.functional:
        payload["functional"] = paley.jab_functional(x, cfg.radius, cfg.steps)
    return payload, EXIT_PASS


VERBS = {"words": run_words, "magnus": run_magnus, "order": run_order, "cnd": run_cnd,
         "certify": run_certify, "norm": run_norm, "paley": run_paley}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("job configuration")
    g.add_argument("--config", help="JSON file with job configuration defaults")
    g.add_argument("--rank", type=int)
    g.add_argument("--length", help="word | q:<q> | psiz | pullback:m1,m2,...")
    g.add_argument("--degree", type=int, help="Magnus truncation degree")
    g.add_argument("--max-degree", type=int, dest="max_degree", help="order search depth")
    g.add_argument("--radius", type=int)
    g.add_argument("--tgrid", help="default | t1,t2,... | geom:lo:hi:n")
    g.add_argument("--tol", type=float)
    g.add_argument("--steps", type=int, help="Lanczos steps")
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=["json", "csv"])
    g.add_argument("--jobs", type=int)
    g.add_argument("--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="lacunae", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("words", parents=[common], help="reduce, multiply or enumerate words")
    p.add_argument("action", choices=["reduce", "multiply", "ball"])
    p.add_argument("words", nargs="*")

    p = sub.add_parser("magnus", parents=[common], help="Magnus series and J coefficients")
    p.add_argument("words", nargs="+")

    p = sub.add_parser("order", parents=[common], help="compare, sort, split by the Magnus order")
    p.add_argument("action", choices=["compare", "sort", "split"])
    p.add_argument("items", nargs="+", help="two words, or an input file")

    p = sub.add_parser("cnd", parents=[common], help="conditional negativity certificate")
    p.add_argument("--words", help="JSON list of test words (default: ball of --radius)")
    p.add_argument("--schoenberg", help="t grid for the exp(-t psi) positivity test")

    p = sub.add_parser("certify", parents=[common], help="lacunarity certificates")
    p.add_argument("kind", choices=["psi", "rudin", "prop51"])
    p.add_argument("--words", action="append", help="JSON sequence file (repeatable)")

    p = sub.add_parser("norm", parents=[common], help="operator, BMO and H^1 estimates")
    p.add_argument("kind", choices=["op", "bmo", "h1"])
    p.add_argument("--input", required=True, help="Fourier element JSON")
    p.add_argument("--ladder", type=lambda s: [int(r) for r in s.split(",")],
                   help="comma-separated radii for the convergence ladder")

    p = sub.add_parser("paley", parents=[common], help="Paley inequality checks")
    p.add_argument("kind", choices=["theorem1", "lambda4", "split", "jab"])
    p.add_argument("--input", required=True)
    p.add_argument("--functional", action="store_true", help="jab: also evaluate the J_AB functional")
    return parser


def resolve_config(args) -> JobConfig:
    values = {}
    if args.config:
        raw = load_json(args.config)
        if not isinstance(raw, dict):
            raise InputError("schema error: config must be a JSON object")
        known = {f.name for f in fields(JobConfig)}
        unknown = set(raw) - known
        if unknown:
            raise InputError(f"schema error: unknown config keys {sorted(unknown)}")
        values.update(raw)
    for f in fields(JobConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    cfg = JobConfig(**values)
    if cfg.rank < 1:
        raise InputError("rank must be positive")
    return cfg


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(payload, fmt) -> str:
    if fmt == "json":
        return dumps(payload) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(json.loads(dumps(payload))):
        w.writerow([k, json.dumps(v) if isinstance(v, list) else v])
    return buf.getvalue()


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        payload, status = VERBS[args.verb](args, cfg)
    except (InputError, WordParseError, ValueError, KeyError, TypeError) as exc:
        print(f"lacunae: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UndecidedOrderError as exc:
        print(f"lacunae: undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except (BudgetExceededError, ConvergenceError) as exc:
        print(f"lacunae: budget: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    report = {"verb": args.verb, "config": asdict(cfg), **payload,
              "status": {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_UNDECIDED: "undecided"}[status]}
    _emit(render(report, cfg.format), args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())

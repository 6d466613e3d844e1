"""Command-line front end; every command prints one JSON report.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or
parameter error, 3 indeterminate (non-unit pivot over a composite modulus).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from . import __version__
from .combinat import enumerate_subsets
from .extrep import (
    ElementaryWord,
    RepMatrix,
    cauchy_binet,
    evaluate_word,
    exterior_torus,
    exterior_transvection,
    random_gl,
    random_word,
    residue,
    transvection_factors,
)
from .forms import (
    form_polarized,
    ideal_F_generators,
    plucker_set,
    semi_invariance_scalar,
    stabilizes_ideal_F,
    stabilizes_plucker,
)
from .liealg import lie_report
from .linalg import det
from .normalizer import normalizer_equalities_demo
from .rings import (
    IndeterminateError,
    IntegersMod,
    PolynomialRing,
    Ring,
    RingElem,
    RingError,
    is_prime,
    parse_ring,
)

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INDETERMINATE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def threads_from_env() -> int:
    raw = os.environ.get("EXTPOW_THREADS", "").strip()
    if not raw:
        return 1
    try:
        t = int(raw)
    except ValueError:
        raise UsageError(f"EXTPOW_THREADS must be a positive integer, got {raw!r}")
    if t < 1:
        raise UsageError("EXTPOW_THREADS must be a positive integer")
    return t


def pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Map preserving input order whatever the number of workers."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _ring(token: str) -> Ring:
    try:
        return parse_ring(token)
    except RingError as exc:
        raise UsageError(str(exc))


def _check_nm(n: int, m: int) -> None:
    if n < 1 or not (1 <= m <= n):
        raise UsageError(f"need 1 <= m <= n, got n={n}, m={m}")


def _pair(text: str, n: int) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"expected i,j, got {text!r}")
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise UsageError(f"transvection indices {i},{j} invalid for n={n}")
    return i, j


def _xi(ring: Ring, text: str | None) -> tuple[Ring, RingElem]:
    """Parameter xi: an indeterminate over ``ring`` unless a value is given."""
    if text is None or text == "xi":
        P = PolynomialRing(ring, ("xi",))
        return P, RingElem(P, P.gen("xi"))
    try:
        return ring, ring.parse(text)
    except (RingError, ValueError):
        raise UsageError(f"cannot read {text!r} as an element of {ring.token}")


# -- rep ---------------------------------------------------------------------------------

def cmd_rep(args) -> tuple[dict, int]:
    n, m = args.n, args.m
    _check_nm(n, m)
    base = _ring(args.ring)
    chosen = [x for x in (args.transvection, args.torus, args.word, args.matrix) if x is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --transvection, --torus, --word, --matrix")
    report: dict = {"schema": SCHEMA, "command": "rep",
                    "params": {"n": n, "m": m, "ring": base.token}}
    if args.transvection is not None:
        i, j = _pair(args.transvection, n)
        R, xi = _xi(base, args.xi)
        g = exterior_transvection(n, m, i, j, xi, R)
        report["params"].update({"construct": "transvection", "i": i, "j": j, "xi": str(xi)})
        report["factors"] = [{"row": str(I), "col": str(J), "value": str(c)}
                             for I, J, c in transvection_factors(n, m, i, j, xi, R)]
    elif args.torus is not None:
        i = args.torus
        if not 1 <= i <= n:
            raise UsageError(f"torus index {i} invalid for n={n}")
        R, xi = _xi(base, args.xi)
        g = exterior_torus(n, m, i, xi, R)
        report["params"].update({"construct": "torus", "i": i, "xi": str(xi)})
    elif args.word is not None:
        R, xi = _xi(base, args.xi)
        factors = []
        for part in (p for p in args.word.split(";") if p.strip()):
            pair, _, val = part.partition(":")
            a, b = _pair(pair.strip(), n)
            x = xi if not val.strip() else R.parse(val.strip())
            factors.append((a, b, x.value))
        word = ElementaryWord(R, tuple(factors))
        g = evaluate_word(word, n, m)
        report["params"].update({"construct": "word", "word": word.to_json()["factors"]})
    else:
        R = base
        if args.matrix == "identity":
            g = RepMatrix.identity(R, n, m)
        else:
            with open(args.matrix) as fh:
                doc = json.load(fh)
            rows = [[R.parse_payload(str(x)) for x in row] for row in doc["rows"]]
            if len(rows) != n:
                raise UsageError(f"matrix file has {len(rows)} rows, expected n={n}")
            g = cauchy_binet(rows, m, R)
        report["params"].update({"construct": "matrix", "matrix": args.matrix})
    report["index"] = [str(s) for s in enumerate_subsets(n, m)]
    report["matrix"] = g.to_json(args.storage)
    report["diagonal"] = [str(g[a, a]) for a in range(g.N)]
    report["nnz"] = g.nnz
    if g.ring.is_field:
        report["residue"] = residue(g)
    return report, EXIT_OK


# -- verify ------------------------------------------------------------------------------

def _prime_factors(k: int) -> list[int]:
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def _verify_rows(kind: str, n: int, m: int, R: Ring, samples: int, seed: int, threads: int) -> list[dict]:
    rng = random.Random(seed)
    if kind == "plucker":
        if not 1 <= m <= n - 1:
            raise UsageError("plucker needs 1 <= m <= n - 1")
        ps = plucker_set(n, m)
        words = [random_word(n, 2 * n, R, rng.getrandbits(63)) for _ in range(samples)]

        def run(item):
            s, w = item
            ok = stabilizes_plucker(evaluate_word(w, n, m), ps)
            return {"index": s, "word": w.to_json()["factors"], "result": ok, "pass": ok}
        return pmap(run, list(enumerate(words)), threads)
    if kind == "form":
        if n % m or n // m < 2:
            raise UsageError("form needs m | n with n / m >= 2")
        f = form_polarized(n, m, R)
        hs = [random_gl(n, R, rng) for _ in range(samples)]

        def run(item):
            s, h = item
            d = RingElem(R, det(h, R))
            lam = semi_invariance_scalar(cauchy_binet(h, m, R), f)
            return {"index": s, "det": str(d), "lambda": None if lam is None else str(lam),
                    "pass": lam is not None and lam == d}
        return pmap(run, list(enumerate(hs)), threads)
    if kind == "ideal":
        if n % m == 0 or n // m < 2:
            raise UsageError("ideal needs m not dividing n and floor(n / m) >= 2")
        gens = ideal_F_generators(n, m, R)
        hs = [random_gl(n, R, rng) for _ in range(samples)]

        def run(item):
            s, h = item
            w = stabilizes_ideal_F(cauchy_binet(h, m, R), gens)
            row = {"index": s, "det": str(RingElem(R, det(h, R))), "pass": w is not None}
            if w is not None:
                row["lambdas"] = [str(v) for v in w.lambdas.values()]
                row["lambdas_all_units"] = w.all_units()
            return row
        return pmap(run, list(enumerate(hs)), threads)
    raise UsageError(f"unknown kind {kind!r}")


def cmd_verify(args) -> tuple[dict, int]:
    n, m = args.n, args.m
    _check_nm(n, m)
    R = _ring(args.ring)
    if args.samples < 0:
        raise UsageError("samples must be nonnegative")
    threads = threads_from_env()
    report = {"schema": SCHEMA, "command": "verify",
              "params": {"kind": args.kind, "n": n, "m": m, "ring": R.token,
                         "samples": args.samples, "seed": args.seed}}
    split = args.per_prime and isinstance(R, IntegersMod) and not is_prime(R.modulus)
    code = None
    try:
        rows = _verify_rows(args.kind, n, m, R, args.samples, args.seed, threads)
        report["samples"] = rows
        report["pass"] = all(r["pass"] for r in rows)
    except IndeterminateError as exc:
        if not split:
            raise
        report["samples"] = []
        report["pass"] = None
        report["indeterminate"] = str(exc)
        code = EXIT_INDETERMINATE
    if split:
        report["per_prime"] = {}
        for p in _prime_factors(R.modulus):
            sub = _verify_rows(args.kind, n, m, IntegersMod(p), args.samples, args.seed, threads)
            report["per_prime"][str(p)] = {"pass": all(r["pass"] for r in sub)}
    if code is None:
        code = EXIT_OK if report["pass"] else EXIT_FAIL
    return report, code


# -- liedim / normalizer --------------------------------------------------------------------

def cmd_liedim(args) -> tuple[dict, int]:
    n, m = args.n, args.m
    _check_nm(n, m)
    F = _ring(args.field)
    if not F.is_field:
        raise UsageError(f"{F.token} is not a field")
    mode = args.mode
    if mode in ("plain", "extended") and (n % m or n // m < 3):
        raise UsageError(f"mode {mode} needs m | n with n / m >= 3")
    if mode == "ideal" and (n % m == 0 or n // m < 2):
        raise UsageError("mode ideal needs m not dividing n and floor(n / m) >= 2")
    if mode == "plucker" and not 1 <= m <= n - 1:
        raise UsageError("mode plucker needs 1 <= m <= n - 1")
    rep = lie_report(n, m, F, mode)
    report = {"schema": SCHEMA, "command": "liedim", **rep}
    return report, EXIT_OK if rep["pass"] else EXIT_FAIL


def cmd_normalizer(args) -> tuple[dict, int]:
    n, m = args.n, args.m
    _check_nm(n, m)
    R = _ring(args.ring)
    if args.samples < 0:
        raise UsageError("samples must be nonnegative")
    if n < 4 or n % m or n // m < 3:
        raise UsageError("normalizer needs n >= 4 and m | n with n / m >= 3")
    rep = normalizer_equalities_demo(n, m, R, args.samples, args.seed, threads_from_env())
    report = {"schema": SCHEMA, "command": "normalizer", **rep}
    if any(v == "indeterminate" for row in rep["samples"] for v in row["verdicts"].values()):
        return report, EXIT_INDETERMINATE
    return report, EXIT_OK if rep["pass"] and rep["consistent"] else EXIT_FAIL


# -- entry point -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extpow", description="Exterior powers of GL_n: exact checks with JSON reports.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ring_default="Q", samples=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--ring", default=ring_default, help="Z, Q, Z/k, F<p>, F<p>[d], poly(<ring>; names)")
        if samples:
            sp.add_argument("--samples", type=int, default=10)
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default="-", help="file path, or - for stdout")
        sp.add_argument("--pretty", action="store_true")

    rep = sub.add_parser("rep", help="build an exterior-power matrix")
    common(rep, ring_default="Z", samples=False)
    rep.add_argument("--transvection", metavar="I,J")
    rep.add_argument("--torus", type=int, metavar="I")
    rep.add_argument("--word", metavar="I,J[:XI];...")
    rep.add_argument("--matrix", metavar="identity|PATH")
    rep.add_argument("--xi", default=None, help="parameter value; an indeterminate xi when omitted")
    rep.add_argument("--storage", choices=("sparse", "dense"), default="sparse")
    rep.set_defaults(func=cmd_rep)

    ver = sub.add_parser("verify", help="stabilizer checks on random samples")
    common(ver)
    ver.add_argument("--kind", choices=("plucker", "form", "ideal"), required=True)
    ver.add_argument("--per-prime", action="store_true", help="also rerun over each prime factor of a composite modulus")
    ver.set_defaults(func=cmd_verify)

    lie = sub.add_parser("liedim", help="Lie algebra dimension of a stabilizer")
    lie.add_argument("--n", type=int, required=True)
    lie.add_argument("--m", type=int, required=True)
    lie.add_argument("--field", default="Q")
    lie.add_argument("--mode", choices=("plain", "extended", "ideal", "plucker"), default="extended")
    lie.add_argument("--output", default="-")
    lie.add_argument("--pretty", action="store_true")
    lie.set_defaults(func=cmd_liedim)

    nor = sub.add_parser("normalizer", help="sample-level normalizer equalities")
    common(nor)
    nor.set_defaults(func=cmd_normalizer)
    return p


def dumps(report: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(report, separators=(",", ":"), ensure_ascii=False) + "\n"


def _emit(text: str, output: str) -> None:
    if output in ("-", ""):
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    pretty = getattr(args, "pretty", False)
    try:
        report, code = args.func(args)
    except (UsageError, RingError, ValueError) as exc:
        sys.stderr.write(dumps({"schema": SCHEMA, "error": "usage", "message": str(exc)}, pretty))
        return EXIT_USAGE
    except IndeterminateError as exc:
        sys.stderr.write(dumps({"schema": SCHEMA, "error": "indeterminate", "message": str(exc)}, pretty))
        return EXIT_INDETERMINATE
    _emit(dumps(report, pretty), args.output)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

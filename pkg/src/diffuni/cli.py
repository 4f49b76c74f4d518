"""Command-line entry point: ``diffuni <command> [options]``.

Machine output (JSON or CSV) goes to stdout or --out; diagnostics go to
stderr.  Exit status is 0 on success, 2 on invalid input and 1 on internal
errors, including a failed --verify.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np

from . import experiments as ex
from .errors import DegreeDrop, DiffUniError, InternalInvariantViolation, InvalidArgument
from .field import DEFAULT_REDUCTION, FieldSpec, field_new, parse_hex
from .lmap import b1_over_b0_formula, compute_L, d_of_m
from .morse import is_morse, is_morse_bruteforce, nonmorse_stats
from .poly import DerivativePair, Poly, T_raw, second_derivative
from .regularity import (
    build_covering_family,
    image_mask,
    image_T_bruteforce,
    in_image_T,
    regular_hypothesis_holds,
    solve_T,
    theta,
)
from .rng import random_poly
from .secdiff import delta, delta2, delta2_monomial, truth_table

COMMANDS = (
    "delta",
    "delta2",
    "lmap",
    "morse",
    "regularity",
    "density",
    "inversion-table",
    "curve",
    "chebotarev",
    "covering-family",
)
MAX_N = max(DEFAULT_REDUCTION)


class VerifyFailed(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diffuni", description="Second-order differential uniformity toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int, help="field degree: F_(2^n)")
    p.add_argument("--reduction", help="reduction polynomial as hex bits, e.g. 11b")
    p.add_argument("--poly", help="coefficients as comma-separated hex, lowest degree first")
    p.add_argument("--monomial-exp", type=int, help="use f = x^e instead of --poly")
    p.add_argument("--alpha")
    p.add_argument("--alpha-prime")
    p.add_argument("--beta")
    p.add_argument("--m", type=int, help="degree of sampled polynomials")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int)
    p.add_argument("--epsilon", help="rational, e.g. 1/4")
    p.add_argument("--n-min", type=int, default=2, help="inversion-table: first n")
    p.add_argument("--q", type=int, help="chebotarev: field size (default 2^n)")
    p.add_argument("--d-K", dest="d_K", type=int, default=1)
    p.add_argument("--d-LK", dest="d_LK", type=int, default=1)
    p.add_argument("--g-K", dest="g_K", type=int, default=0)
    p.add_argument("--g-L", dest="g_L", type=int, default=0)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--verify", action="store_true", help="re-derive the headline number with a slower oracle")
    return p


# -- argument helpers ----------------------------------------------------------------


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InvalidArgument(f"{args.command} needs --{name.replace('_', '-')}")


def _field(args) -> FieldSpec:
    _need(args, "n")
    if not 2 <= args.n <= MAX_N:
        raise InvalidArgument(f"--n must lie in [2, {MAX_N}]")
    red = parse_hex(args.reduction) if args.reduction else None
    return field_new(args.n, red)


def _elem(F: FieldSpec, s: str, name: str) -> int:
    v = parse_hex(s)
    if v >> F.n:
        raise InvalidArgument(f"--{name} {s} does not fit in F_(2^{F.n})")
    return v


def _pair(F: FieldSpec, args) -> DerivativePair:
    _need(args, "alpha", "alpha_prime")
    return DerivativePair.of(F, _elem(F, args.alpha, "alpha"), _elem(F, args.alpha_prime, "alpha-prime"))


def _poly(F: FieldSpec, args, allow_monomial: bool = True) -> Poly:
    if args.poly is not None:
        items = [s.strip() for s in args.poly.split(",")]
        if not items or any(not s for s in items):
            raise InvalidArgument("--poly must be comma-separated hex coefficients")
        return Poly(F, [_elem(F, s, "poly") for s in items])
    if allow_monomial and args.monomial_exp is not None:
        if args.monomial_exp < 0:
            raise InvalidArgument("--monomial-exp must be non-negative")
        return Poly.monomial(F, args.monomial_exp)
    raise InvalidArgument(f"{args.command} needs --poly" + (" or --monomial-exp" if allow_monomial else ""))


def _reduce_exp(F: FieldSpec, e: int) -> int:
    """Exponent in [0, q) giving the same map x -> x^e on F."""
    if e < F.q:
        return e
    return (e - 1) % (F.q - 1) + 1


def _check(ok: bool, what: str):
    if not ok:
        raise VerifyFailed(what)


# -- commands ------------------------------------------------------------------------------


def cmd_delta(args) -> dict:
    F = _field(args)
    f = _poly(F, args)
    rep = delta(f, args.threads)
    out = {"n": F.n, **rep.to_json()}
    if args.verify:
        tt = truth_table(f).tolist()
        best = 0
        for a in range(1, F.q):
            counts: dict[int, int] = {}
            for x in range(F.q):
                v = tt[x] ^ tt[x ^ a]
                counts[v] = counts.get(v, 0) + 1
            best = max(best, max(counts.values()))
        _check(best == rep.value, f"delta: fast {rep.value} vs direct {best}")
        out["verified"] = True
    return out


def cmd_delta2(args) -> dict:
    F = _field(args)
    t0 = time.perf_counter()
    if args.poly is None and args.monomial_exp is not None:
        e = _reduce_exp(F, args.monomial_exp)
        rep = delta2_monomial(e, F.n, args.threads, field=F)
        slow = lambda: delta2(Poly.monomial(F, e), args.threads, full=True).value  # noqa: E731
    else:
        f = _poly(F, args)
        rep = delta2(f, args.threads)
        slow = lambda: delta2(f, args.threads, full=True).value  # noqa: E731
    elapsed = (time.perf_counter() - t0) * 1000
    out = {"n": F.n, **rep.to_json()}
    if args.verify:
        v = slow()
        _check(v == rep.value, f"delta2: fast {rep.value} vs full scan {v}")
        out["verified"] = True
    out["elapsed_ms"] = round(elapsed, 3)
    return out


def cmd_lmap(args) -> dict:
    F = _field(args)
    f = _poly(F, args, allow_monomial=True)
    pair = _pair(F, args)
    res = compute_L(f, pair)
    D = second_derivative(f, pair)
    T = T_raw(F, pair.a, pair.b)
    if res.g.compose(T) != D:
        raise InternalInvariantViolation("g(T) != D^2 f")
    out = {"n": F.n, "pair": pair.to_json(), **res.to_json(), "d_bound": res.d_bound}
    m = len(f.c) - 1
    if m >= 7 and m % 16 in (0, 1, 2, 7, 8, 9, 10, 15) and not res.degree_drop:
        try:
            out["b1_over_b0_formula"] = b1_over_b0_formula(f, pair).hex()
        except DegreeDrop:
            pass
    if args.verify:
        xs = F.all_elements
        _check(np.array_equal(res.g.values(T.values(xs)), D.values(xs)), "lmap: pointwise g(T(x)) != D^2 f(x)")
        if "b1_over_b0_formula" in out:
            _check(out["b1_over_b0_formula"] == out["b1_over_b0"], "lmap: closed form disagrees")
        out["verified"] = True
    return out


def cmd_morse(args) -> dict:
    F = _field(args)
    if args.poly is not None:
        g = _poly(F, args, allow_monomial=False)
        v = is_morse(g)
        out = {"n": F.n, "is_morse": v.is_morse, "failed_condition": v.failed_condition, "details": v.details}
        if args.verify:
            b = is_morse_bruteforce(g)
            _check((b.is_morse, b.failed_condition) == (v.is_morse, v.failed_condition), "morse: brute force disagrees")
            out["verified"] = True
        return out
    _need(args, "m", "samples")
    pair = _pair(F, args)
    stats = nonmorse_stats(args.m, F.n, pair, args.samples, args.seed, args.threads)
    out = stats.to_json()
    if args.verify:
        bad = 0
        for i in range(args.samples):
            g = compute_L(random_poly(F, args.m, args.seed, i, exact_degree=False), pair).g
            if len(g.c) - 1 != d_of_m(args.m) or not is_morse_bruteforce(g).is_morse:
                bad += 1
        _check(bad == stats.nonmorse + stats.degree_drop, "morse: brute-force sample count disagrees")
        out["verified"] = True
    return out


def cmd_regularity(args) -> dict:
    F = _field(args)
    pair = _pair(F, args)
    u, v = theta(pair)
    mask = image_mask(pair)
    out = {
        "n": F.n,
        "pair": pair.to_json(),
        "theta": [u.hex(), v.hex()],
        "image_size": int(mask.sum()),
    }
    if args.beta is not None:
        c = F(_elem(F, args.beta, "beta"))
        out["in_image"] = in_image_T(c, pair)
        out["solutions"] = sorted(x.hex() for x in solve_T(pair, c))
    if args.poly is not None:
        f = _poly(F, args, allow_monomial=False)
        out["hypothesis"] = regular_hypothesis_holds(f, pair)
    if args.verify:
        _check(set(np.flatnonzero(mask).tolist()) == image_T_bruteforce(pair), "regularity: Im T mismatch")
        out["verified"] = True
    return out


def cmd_density(args):
    F = _field(args)
    _need(args, "m", "samples")
    st = ex.density_experiment(args.m, F.n, args.samples, args.seed, args.threads, field=F)
    if args.verify:
        d0 = st.hits
        hits = 0
        for i in range(args.samples):
            r = delta2(random_poly(F, args.m, args.seed, i), threads=1, full=True)
            hits += (not r.degenerate) and r.value == ex.delta0_of_m(args.m)
        _check(hits == d0, f"density: {d0} hits vs {hits} by full scan")
    return st


def cmd_inversion_table(args) -> dict:
    _need(args, "n")
    if not 2 <= args.n_min <= args.n <= MAX_N:
        raise InvalidArgument("need 2 <= --n-min <= --n")
    table = ex.inversion_delta2_table(args.n_min, args.n, args.threads)
    if args.verify:
        for n, v in table.items():
            F = field_new(n)
            full = delta2(Poly.monomial(F, F.q - 2), args.threads, full=True).value
            _check(full == v, f"inversion-table: n={n} reduced {v} vs full {full}")
    return {"table": {str(k): v for k, v in table.items()}}


def cmd_curve(args) -> dict:
    F = _field(args)
    c = ex.curve_counts(F.n, field=F)
    out = c.to_json()
    if args.verify:
        _check(c.count_C == c.count_C_direct, "curve: inverse-map and fibre counts disagree")
        if F.n % 2:
            _check(c.count_C == 4 * c.count_sols, "curve: #C != 4 * count_sols")
        out["verified"] = True
    return out


def cmd_chebotarev(args) -> dict:
    if args.q is None:
        _need(args, "n")
        q = 2**args.n
    else:
        q = args.q
    inp = ex.ChebotarevInput(q, args.d_K, args.d_LK, args.g_K, args.g_L, args.s)
    b = ex.chebotarev_lower_bound(inp)
    out = {
        "q": q,
        "bound": f"{b.numerator}/{b.denominator}",
        "positive": b > 0,
        "threshold_n": ex.chebotarev_threshold(args.d_K, args.d_LK, args.g_K, args.g_L, max(args.s, 1)),
    }
    if args.verify:
        getcontext().prec = 80
        r2 = -int((-Decimal(q).sqrt()).to_integral_value(rounding="ROUND_FLOOR"))
        r4 = -int((-Decimal(q).sqrt().sqrt()).to_integral_value(rounding="ROUND_FLOOR"))
        err = (inp.d_LK + inp.g_L) * r2 + inp.d_LK * (2 * inp.g_K + 1) * r4 + inp.g_L + inp.d_K * inp.d_LK
        alt = Fraction(inp.s * q - 2 * inp.s * err, inp.d_LK)
        _check(alt == b, "chebotarev: decimal recomputation disagrees")
        out["verified"] = True
    return out


def cmd_covering_family(args):
    F = _field(args)
    _need(args, "epsilon")
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidArgument(f"bad --epsilon {args.epsilon!r}") from e
    fam = build_covering_family(F.n, eps, field=F)
    if args.verify:
        for i, p in enumerate(fam):
            img = image_T_bruteforce(p)
            want = {c for c in range(F.q) if not (c >> (2 * i)) & 3}
            _check(img == want, f"covering-family: pair {i} has the wrong image")
    return fam.to_json()


HANDLERS = {
    "delta": cmd_delta,
    "delta2": cmd_delta2,
    "lmap": cmd_lmap,
    "morse": cmd_morse,
    "regularity": cmd_regularity,
    "density": cmd_density,
    "inversion-table": cmd_inversion_table,
    "curve": cmd_curve,
    "chebotarev": cmd_chebotarev,
    "covering-family": cmd_covering_family,
}


def _render(command: str, result, fmt: str | None) -> str:
    if fmt is None:
        fmt = "csv" if command == "density" else "json"
    if isinstance(result, ex.DensityStats):
        if fmt == "csv":
            return f"{ex.DensityStats.CSV_HEADER}\n{result.csv_row()}\n"
        return json.dumps(result.to_json(), indent=2) + "\n"
    if fmt == "csv":
        return _to_csv(command, result)
    return json.dumps(result, indent=2) + "\n"


def _to_csv(command: str, result) -> str:
    if command == "inversion-table":
        lines = ["n,delta2"] + [f"{k},{v}" for k, v in result["table"].items()]
    elif command == "covering-family":
        lines = ["alpha,alpha_prime"] + [f"{p['alpha']},{p['alpha_prime']}" for p in result]
    else:
        flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
        lines = [",".join(flat), ",".join(_csv_cell(v) for v in flat.values())]
    return "\n".join(lines) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.threads is not None and args.threads < 1:
        print("diffuni: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        result = HANDLERS[args.command](args)
        text = _render(args.command, result, args.format)
    except VerifyFailed as e:
        print(f"diffuni: verification failed: {e}", file=sys.stderr)
        return 1
    except (DiffUniError, ValueError) as e:
        if isinstance(e, InternalInvariantViolation):
            print(f"diffuni: internal error: {e}", file=sys.stderr)
            return 1
        print(f"diffuni: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - last-resort guard
        print(f"diffuni: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0

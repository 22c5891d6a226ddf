"""Command-line entry point: one subcommand per experiment, plus ``verify``.

Every run prints a JSON record (parameters, seed, outputs, qubit ledger) to
stdout and, with ``--out DIR``, also writes it and any CSV files there.
Exit codes: 0 success, 1 failed check, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__

SCHEMA_VERSION = 1
SEED_ENV = "HASHEDPF_SEED"


class CheckFailed(RuntimeError):
    pass


@dataclass
class RunRecord:
    subcommand: str
    params: dict
    seed: int
    outputs: dict = field(default_factory=dict)
    ledger: dict = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__
    schema: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), default=_plain, indent=2, sort_keys=True)


def _plain(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def _int(text: str) -> int:
    return int(text, 0)


def _hex(text: str) -> int:
    return int(text, 16)


def _write(out: Path | None, name: str, text: str, outputs: dict):
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text, encoding="utf-8")
    outputs.setdefault("files", []).append(str(path))


# -- subcommands ---------------------------------------------------------------

def cmd_simon(args, rec: RunRecord, out):
    from . import simon
    from .hashing import FamilySpec

    t = None if args.id_mode else args.t
    rep = simon.query_statistics(args.n, t, args.trials, args.seed, engine=args.engine)
    rec.outputs["report"] = json.loads(rep.to_json())
    rec.ledger = {"input_bits": args.n, "output_bits": args.n if t is None else t,
                  "total": args.n + (args.n if t is None else t)}
    if args.samples_csv:
        rng = np.random.default_rng(args.seed)
        inst = simon.random_simon(args.n, simon.random_period(args.n, rng), rng)
        ys: list[int] = []
        simon.hashed_simon(inst, None if t is None else FamilySpec(args.n, t), rng, record=ys)
        body = "index,outcome_decimal,outcome_binary\n" + "".join(
            f"{i},{y},{y:0{args.n}b}\n" for i, y in enumerate(ys)
        )
        _write(out, "simon_samples.csv", body, rec.outputs)
        rec.outputs["planted_period"] = str(inst.s)
    if rep.success_probability != 1.0:
        raise CheckFailed("a run returned a wrong period")


def cmd_shor(args, rec: RunRecord, out):
    from . import closedform, shor
    from .hashing import FamilySpec, sample

    inst = shor.OrderInstance.make(args.N, args.a, args.q)
    t = None if args.id_mode else args.t
    rec.params["q"] = inst.q
    rec.ledger = shor.qubit_ledger(inst, t)
    rec.outputs["order"] = inst.d
    if args.dump_dist:
        plain = closedform.shor_table(inst, inst.q)
        _write(out, "shor_id.csv", plain.distribution().to_csv(), rec.outputs)
        if t is not None:
            if args.m0 is not None:
                h = shor.power_partition_hash(inst, args.m0)
            else:
                h = sample(FamilySpec(inst.width, t), np.random.default_rng(args.seed))
            hashed = closedform.hash_table(plain, h).distribution()
            _write(out, "shor_hashed.csv", hashed.to_csv(), rec.outputs)
            rec.outputs["hashed_support"] = {str(k): v for k, v in hashed.as_dict().items()}
            if inst.width * t <= closedform.SCALING_LIMIT:
                avg = closedform.Distribution(closedform.family_average(plain, FamilySpec(inst.width, t)), inst.q)
                _write(out, "shor_family_average.csv", avg.to_csv(), rec.outputs)
    if args.trials:
        rep = shor.order_statistics(inst, t, args.trials, args.seed)
        rec.outputs["report"] = json.loads(rep.to_json())
        if rep.success_probability != 1.0:
            raise CheckFailed("a run returned a wrong order")
        if inst.m is not None and inst.d & (inst.d - 1) == 0 and inst.d > 1:
            rep2 = shor.pow2_expected_queries(inst, t, args.trials, args.seed)
            rec.outputs["pow2_report"] = json.loads(rep2.to_json())


def cmd_ekera(args, rec: RunRecord, out):
    from . import ekera
    from .hashing import FamilySpec

    inst = ekera.EHInstance.plant(args.p, args.g, args.d, args.s)
    spec = None if args.t is None else FamilySpec(inst.width, args.t)
    rng = np.random.default_rng(args.seed)
    pairs = ekera.sample_pairs(inst, args.samples, rng, spec)
    d = ekera.recover_d_scoring(pairs, inst)
    rec.outputs.update({"recovered_d": d, "planted_d": args.d, "pairs": [list(p) for p in pairs]})
    rec.ledger = ekera.qubit_ledger(inst, args.t)
    if d != args.d:
        raise CheckFailed(f"recovered {d}, planted {args.d}")


def cmd_em_attack(args, rec: RunRecord, out):
    from . import evenmansour as em

    rng = np.random.default_rng(args.seed)
    inst = em.EMInstance.random(args.n, args.rounds, rng, k=args.k, kprime=args.kprime)
    res = em.em_attack(inst, rng, t=args.t)
    rec.outputs.update({
        "recovered_k": res.key_string(args.n),
        "planted_k": format(inst.k, f"0{args.n}b"),
        "kprime": format(inst.kprime, f"0{args.n // 2}b"),
        "quantum_queries": res.queries,
        "classical_queries": res.classical_queries,
        "restarts": res.restarts,
    })
    rec.ledger = {"input_bits": args.n, "output_bits": args.t, "total": res.wires}
    if args.export_gates:
        _write(out, "em_gates.json", em.compile_em(inst).to_json(), rec.outputs)
    if res.k != inst.k:
        raise CheckFailed("recovered key differs from planted key")


def cmd_offline(args, rec: RunRecord, out):
    from . import evenmansour as em
    from . import offline

    params = offline.OfflineParams(args.n, args.t, Fraction(args.c))
    rng = np.random.default_rng(args.seed)
    inst = em.EMInstance.random(args.n, args.rounds, rng)
    res = offline.offline_attack(inst, params, rng)
    rec.outputs.update({
        "recovered_k": format(res.k, f"0{args.n}b"),
        "planted_k": format(inst.k, f"0{args.n}b"),
        "g_queries": res.g_queries,
        "verify_queries": res.verify_queries,
        "guesses": res.guesses,
        "bad_event": res.bad,
        "zero_fraction": res.zero_fraction,
    })
    rec.ledger = offline.qubit_ledger(params)
    if res.k != inst.k:
        raise CheckFailed("recovered key differs from planted key")


def _group(text: str):
    from .gfpm import GFContext
    from .groups import GFMultiplicative, MultiplicativeModN, prime_field

    kind, *nums = text.split(":")
    try:
        vals = [int(v) for v in nums]
        if kind == "zn" and len(vals) == 1:
            return MultiplicativeModN(vals[0]), None
        if kind == "fp" and len(vals) == 1:
            return prime_field(vals[0]), None
        if kind == "gf" and len(vals) == 2:
            ctx = GFContext(*vals)
            return GFMultiplicative(ctx), ctx
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    raise argparse.ArgumentTypeError("group must be zn:N, fp:p or gf:p:m")


def cmd_mosca_ekert(args, rec: RunRecord, out):
    from . import moscaekert as me

    group, ctx = args.group
    comp = None
    if args.compress == "norm":
        if ctx is None:
            raise CheckFailed("the norm compressor needs a gf:p:m group")
        comp = me.norm_compressor(ctx)
    ys = me.sample_runs(group, args.a, args.q, args.trials, args.seed, comp)
    freq = np.bincount(ys, minlength=1 << args.q) / max(1, args.trials)
    exact = me.qft_distribution(group, args.a, args.q, comp)
    rec.outputs.update({
        "frequencies": {str(i): float(f) for i, f in enumerate(freq) if f},
        "total_variation_vs_qft": exact.total_variation(freq),
    })
    plain, hashed = me.hashed_run_qubit_ledger(group, comp)
    rec.ledger = {"plain_total": plain, "hashed_total": hashed}


def cmd_ddh(args, rec: RunRecord, out):
    from . import gfpm

    ctx = gfpm.GFContext(args.p, args.m)
    if not ctx.ddh_valid:
        raise CheckFailed(f"q1 = {ctx.q1} or q2 = {ctx.q2} is not prime")
    rng = np.random.default_rng(args.seed)
    g = gfpm.find_qr_generator(ctx, rng)
    verdicts = []
    for _ in range(args.trials):
        inst = gfpm.plant_ddh(ctx, g, rng, args.plant == "ddh")
        v = gfpm.ddh_distinguish(ctx, inst.g, inst.ga, inst.gb, inst.gc, rng)
        verdicts.append(v.label)
    rec.outputs.update({
        "q1": ctx.q1,
        "q2": ctx.q2,
        "modulus": list(ctx.modulus),
        "generator": list(g.coeffs),
        "verdicts": verdicts,
        "accept_rate": verdicts.count("DDH") / len(verdicts) if verdicts else None,
    })
    rec.ledger = gfpm.qubit_ledger(ctx)
    if args.plant == "ddh" and "random" in verdicts:
        raise CheckFailed("a planted DDH tuple was rejected")


def cmd_verify(args, rec: RunRecord, out):
    from . import verify

    results = verify.run(full=args.full, seed=args.seed)
    rec.outputs["checks"] = [r.as_dict() for r in results]
    for r in results:
        print(r.line(), file=sys.stderr)
    _write(out, "verify.json", json.dumps(rec.outputs["checks"], indent=2), rec.outputs)
    if not all(r.passed for r in results):
        raise CheckFailed("some checks failed")


# -- parser --------------------------------------------------------------------

def _m0(text: str):
    return sorted(int(v) for v in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get(SEED_ENV, "0"))
    ap = argparse.ArgumentParser(prog="hashedpf", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--out", type=Path, default=None, help="directory for the JSON record and CSV files")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simon", parents=[common], help="hashed Simon query statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--id-mode", action="store_true", help="unhashed n-qubit output register")
    p.add_argument("--engine", choices=["statevector", "cached", "closedform"], default="cached")
    p.add_argument("--samples-csv", action="store_true", help="also dump one run's measured y values")
    p.set_defaults(fn=cmd_simon)

    p = sub.add_parser("shor", parents=[common], help="hashed order finding")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--id-mode", action="store_true")
    p.add_argument("--dump-dist", action="store_true", help="write id, hashed and family-average CSVs")
    p.add_argument("--m0", type=_m0, default=None,
                   help="comma-separated k < d whose powers a^k hash to 0 (one-bit table hash)")
    p.set_defaults(fn=cmd_shor)

    p = sub.add_parser("ekera", parents=[common], help="short discrete log with candidate scoring")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--t", type=int, default=None, help="hash width; omit for the unhashed circuit")
    p.add_argument("--samples", type=int, default=30)
    p.set_defaults(fn=cmd_ekera)

    p = sub.add_parser("em-attack", parents=[common], help="n+1 qubit Even-Mansour key recovery")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--k", type=_hex, default=None, help="whitening key in hex")
    p.add_argument("--kprime", type=_hex, default=None, help="round key in hex")
    p.add_argument("--export-gates", action="store_true")
    p.set_defaults(fn=cmd_em_attack)

    p = sub.add_parser("offline", parents=[common], help="offline Simon with hashed copies")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--c", type=str, default="5/3")
    p.add_argument("--rounds", type=int, default=3)
    p.set_defaults(fn=cmd_offline)

    p = sub.add_parser("mosca-ekert", parents=[common], help="semiclassical single-qubit period finding")
    p.add_argument("--group", type=_group, required=True, help="zn:N, fp:p or gf:p:m")
    p.add_argument("--a", type=_int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--compress", choices=["none", "norm"], default="none")
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(fn=cmd_mosca_ekert)

    p = sub.add_parser("ddh", parents=[common], help="norm-hashed DDH distinguisher")
    p.add_argument("--p", type=int, default=7)
    p.add_argument("--m", type=int, default=5)
    p.add_argument("--plant", choices=["ddh", "random"], default="ddh")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(fn=cmd_ddh)

    p = sub.add_parser("verify", parents=[common], help="run the exact (and statistical) check suite")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--quick", action="store_true", help="exact closed-form equalities only (default)")
    g.add_argument("--full", action="store_true", help="also run the statistical suites")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    params = {k: v for k, v in vars(args).items() if k not in ("fn", "out", "seed", "cmd")}
    if "group" in params:
        params["group"] = params["group"][0].name
    rec = RunRecord(args.cmd, params, args.seed)
    start = time.perf_counter()
    code = 0
    try:
        args.fn(args, rec, args.out)
    except CheckFailed as e:
        rec.outputs["error"] = str(e)
        code = 1
    except ValueError as e:
        print(f"hashedpf {args.cmd}: error: {e}", file=sys.stderr)
        return 2
    rec.wall_time = time.perf_counter() - start
    rec.outputs["exit_code"] = code
    text = rec.to_json()
    _write(args.out, f"{args.cmd}_record.json", text + "\n", {})
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

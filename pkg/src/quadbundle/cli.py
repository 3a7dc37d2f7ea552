"""Command line: ``quadbundle run <config> [--primes 3,5] [--format text|structured] [--out path]``.

Exit codes: 0 ok, 1 parse or precondition error, 2 oracle mismatch.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import dataclass

from .config import RunConfig, load_config
from .engine import DecompositionResult, assemble_decomposition
from .errors import QuadBundleError
from .motives import ArtinTateMotive
from .strata import Stratification, build_stratification
from .verify import ConsistencyReport, full_census, multi_prime_consistency

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2


@dataclass
class Report:
    config: RunConfig
    stratification: Stratification
    decomposition: DecompositionResult
    ledgers: dict
    consistency: ConsistencyReport | None
    ledger: tuple

    @property
    def mismatches(self) -> int:
        return sum(len(L.mismatches) for L in self.ledgers.values())

    @property
    def partial(self) -> bool:
        return not self.decomposition.resolved or any(L.partial for L in self.ledgers.values())

    @property
    def verdict(self) -> str:
        if self.mismatches or (self.consistency is not None and not self.consistency.consistent):
            return "MISMATCH"
        return "PARTIAL" if self.partial else "OK"

    @property
    def exit_code(self) -> int:
        return EXIT_MISMATCH if self.verdict == "MISMATCH" else EXIT_OK

    def render(self, fmt: str | None = None) -> str:
        fmt = fmt or self.config.format
        return render_structured(self) if fmt == "structured" else render_text(self)


def _dedupe(items) -> tuple:
    return tuple(dict.fromkeys(items))


def run(config: RunConfig) -> Report:
    """stratify -> decompose -> census per prime -> consistency across primes."""
    fam = config.family
    primes = config.primes
    strat = build_stratification(fam, config.mode, primes=primes, declared=config.assumptions)
    dec = assemble_decomposition(fam, strat, primes=primes)
    ledgers = {q: full_census(fam, strat, dec, q) for q in primes}
    cons = None
    if len(primes) > 1:
        cons = multi_prime_consistency(fam, config.mode, primes, config.assumptions)
    items = [f"declared: {a}" for a in config.assumptions] + list(dec.ledger) + list(dec.warnings)
    return Report(config, strat, dec, ledgers, cons, _dedupe(items))


def _counter(c: Counter) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(c.items())) + "}"


def render_text(rep: Report) -> str:
    cfg, fam, dec = rep.config, rep.config.family, rep.decomposition
    out = [
        f"quadbundle report: {cfg.name}",
        f"base {fam.base.describe()}, r = {fam.r}, {fam.n} fiber variables, mode {rep.stratification.mode}",
        "",
        "assumptions:",
    ]
    out += [f"  - {x}" for x in rep.ledger]
    out += ["", "strata:"]
    for s in rep.stratification:
        bd = ", ".join(rep.stratification.boundary_of(s.id)) or "-"
        out.append(f"  {s.id}: corank {s.corank}, dim {s.expected_dim} ({s.dim_source}), boundary {bd}")
    out += ["", "local motives:"]
    for s in rep.stratification:
        c = dec.covers[s.id]
        cov = "" if c is None else f"   [cover {c.monodromy}, {c.method}]"
        out.append(f"  {s.id}: {dec.local[s.id]}{cov}")
    out += ["", "decomposition:", f"  {dec.motive}"]
    if dec.ramification:
        out += ["", "ramification:"]
        for v in dec.ramification:
            fair = "-" if v.fair is None else ("fair" if v.fair else "not fair")
            out.append(f"  {v.stratum} along {v.boundary}: order {v.order}, {v.verdict}, {fair}")
    for q, L in rep.ledgers.items():
        out += ["", f"census q = {L.q} ({L.method}, {L.points} base points):"]
        for row in L.rows:
            line = f"  {row.stratum}: {row.points} points, predicted {_counter(row.predicted)}, enumerated {_counter(row.enumerated)}"
            if row.traces:
                line += f", split {row.traces.get(1, 0)} / non-split {row.traces.get(-1, 0)}"
            if row.partial:
                line += " (partial)"
            out.append(line)
        out.append(f"  total predicted {L.total_predicted}, enumerated {L.total_enumerated}, mismatches {len(L.mismatches)}")
        for m in L.mismatches:
            out.append(f"  mismatch at {m.point} in {m.stratum}: predicted {m.predicted}, enumerated {m.enumerated} ({m.reason})")
    if rep.consistency is not None:
        c = rep.consistency
        txt = "identical" if c.consistent else "differ at " + ", ".join(map(str, c.differing))
        out += ["", f"per-prime stratum atoms: {txt}"]
    out += ["", f"verdict: {rep.verdict}"]
    return "\n".join(out) + "\n"


def render_structured(rep: Report) -> str:
    fam, dec = rep.config.family, rep.decomposition
    out = [f"REPORT {rep.config.name}", f"BASE {fam.base.describe()}", f"PARAMS {fam.r}", f"MODE {rep.stratification.mode}"]
    out += [f"LEDGER {x}" for x in rep.ledger]
    for s in rep.stratification:
        out.append(f"STRATUM {s.id} {s.corank} {s.expected_dim}")
    for s in rep.stratification:
        for a in dec.local[s.id]:
            out.append(f"LOCAL {s.id} {a.twist} {a.label}")
    for a in dec.motive:
        out.append(f"ATOM {a.stratum} {a.twist} {a.label} {int(a.ic)}")
    for q, L in rep.ledgers.items():
        out.append(f"CENSUS {L.q} {L.total_predicted} {L.total_enumerated}")
        for m in L.mismatches:
            out.append(f"MISMATCH {L.q} {m.stratum} {','.join(map(str, m.point))} {m.predicted} {m.enumerated} {m.reason}")
    out.append(f"VERDICT {rep.verdict}")
    return "\n".join(out) + "\n"


def parse_structured(text: str) -> dict:
    """Read back a structured report: atoms, local atoms and census lines."""
    atoms, local, census = [], [], {}
    verdict = None
    for line in text.splitlines():
        tag, _, rest = line.partition(" ")
        f = rest.split()
        if tag == "ATOM":
            atoms.append((f[0], int(f[1]), f[2], f[3] == "1"))
        elif tag == "LOCAL":
            local.append((f[0], int(f[1]), f[2]))
        elif tag == "CENSUS":
            census[int(f[0])] = (int(f[1]), int(f[2]))
        elif tag == "VERDICT":
            verdict = rest
    return {"atoms": Counter(atoms), "local": Counter(local), "census": census, "verdict": verdict}


def atom_multiset(M: ArtinTateMotive) -> Counter:
    return Counter((a.stratum, a.twist, a.label, a.ic) for a in M)


def _primes_arg(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadbundle", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("run", help="stratify, decompose and verify one config")
    rp.add_argument("config", help="config path, or the name of a bundled config")
    rp.add_argument("--primes", type=_primes_arg, default=None)
    rp.add_argument("--format", choices=("text", "structured"), default=None)
    rp.add_argument("--out", default=None)
    sub.add_parser("list", help="list bundled configs")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        from .config import bundled_configs

        print("\n".join(bundled_configs()))
        return EXIT_OK
    try:
        cfg = load_config(args.config).with_overrides(args.primes, args.format)
        rep = run(cfg)
    except QuadBundleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = rep.render()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())

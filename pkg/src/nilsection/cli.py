"""Command-line driver: verify one branch datum, sweep a box of data, or run seeded property checks."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from itertools import combinations_with_replacement
from typing import Iterator, Sequence

from .gcohom import OracleTooLarge
from .jaclattice import crosscheck_with_curve
from .orbifold import (BranchData, InvalidBranchData, cover, is_prime, section_class_count,
                       validate_and_genus, verify_cor12, verify_prop44, verify_thm13, verify_thm47)

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3
MAX_GENUS = 6
GUARD = {"max_p": 13, "max_h": 3, "max_n": 12}


class GuardTripped(RuntimeError):
    pass


@dataclass
class RunConfig:
    mode: str = "single"
    datum: BranchData | None = None
    max_p: int | None = None
    max_h: int | None = None
    max_n: int | None = None
    seed: int = 0
    output_format: str = "text"
    fail_fast: bool = False
    timings: bool = False

    def __post_init__(self):
        if self.mode not in ("single", "sweep", "proptest"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "single" and self.datum is None:
            raise ValueError("single mode needs a branch datum")
        if self.mode == "sweep" and None in (self.max_p, self.max_h, self.max_n):
            raise ValueError("sweep mode needs --max-p, --max-h and --max-n")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")
        if self.output_format not in ("text", "json-lines"):
            raise ValueError(f"unknown format {self.output_format!r}")


@dataclass
class Report:
    p: int
    h: int
    monodromies: tuple[int, ...]
    handle_images: tuple[int, ...]
    genus: int
    h1_dimension: int | None = None
    section_class_count: int | None = None
    injective: bool | None = None
    kernel_r: tuple[int, ...] | None = None
    liftable_set: tuple[tuple[int, ...], ...] | None = None
    thm47: bool | None = None
    cor12: bool | None = None
    thm13: bool | None = None
    prop44: bool | None = None
    jac_crosscheck: bool | None = None
    timings: dict = field(default_factory=dict)

    FLAGS = ("thm47", "cor12", "thm13", "prop44", "jac_crosscheck")

    @property
    def passed(self) -> bool:
        return all(getattr(self, f) is not False for f in self.FLAGS)

    def to_json(self) -> str:
        return json.dumps(_encode(asdict(self)), sort_keys=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> Report:
        raw = json.loads(line)
        kw = {}
        for f in fields(cls):
            v = raw[f.name]
            kw[f.name] = _decode(v) if f.name != "timings" else {k: float(x) for k, x in v.items()}
        return cls(**kw)

    def to_text(self) -> str:
        def flag(v):
            return "-" if v is None else ("pass" if v else "FAIL")
        datum = BranchData(self.p, self.h, self.monodromies, self.handle_images)
        lines = [f"datum {datum}", f"  genus {self.genus}"]
        if self.h1_dimension is not None:
            lines.append(f"  dim H^1 = {self.h1_dimension}, section classes = {self.section_class_count}")
        if self.injective is not None:
            lines.append(f"  fixed points -> classes injective: {self.injective}")
        if self.kernel_r is not None:
            lines.append(f"  kernel of s_ab spanned by {self.kernel_r}")
        if self.liftable_set is not None:
            lines.append(f"  level-2 liftable classes: {len(self.liftable_set)}")
        lines.append("  " + " ".join(f"{f}={flag(getattr(self, f))}" for f in self.FLAGS))
        for k, v in self.timings.items():
            lines.append(f"  time {k}: {v:.3f}s")
        return "\n".join(lines)


def _encode(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    raise TypeError(f"cannot encode {type(v)}")


def _decode(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, str):
        return int(v)
    if isinstance(v, list):
        return tuple(_decode(x) for x in v)
    raise TypeError(f"cannot decode {v!r}")


def analyse(b: BranchData, timings: bool = False) -> Report:
    genus = validate_and_genus(b)
    C = cover(b)
    rep = Report(b.p, b.h, b.monodromies, b.handle_images, genus)
    clock = {}

    def timed(name, fn):
        t = time.perf_counter()
        out = fn()
        clock[name] = time.perf_counter() - t
        return out

    rep.prop44 = timed("prop44", lambda: verify_prop44(b)).passed
    if b.n >= 2:
        rep.h1_dimension = C.h1.dimension
        rep.section_class_count = section_class_count(C)
        r47 = timed("thm47", lambda: verify_thm47(b))
        rep.thm47 = r47.passed
        rep.kernel_r = r47.details.get("kernel_R")
        r12 = timed("cor12", lambda: verify_cor12(b))
        rep.cor12 = r12.passed
        rep.injective = r12.details["injective"]
        rep.jac_crosscheck = timed("jac_crosscheck", lambda: crosscheck_with_curve(b)).passed
        if b.p == 2:
            r13 = timed("thm13", lambda: verify_thm13(b))
            rep.thm13 = r13.passed
            rep.liftable_set = tuple(r13.details["liftable_witness"])
    if timings:
        rep.timings = clock
    return rep


def primes_upto(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def sweep_data(max_p: int, max_h: int, max_n: int) -> Iterator[BranchData]:
    """Valid data up to symmetry: sorted monodromies, handle images all 0 or (1, 0, ..., 0).

    Data whose cover has genus above MAX_GENUS are left out.
    """
    for key, bound in (("max_p", max_p), ("max_h", max_h), ("max_n", max_n)):
        if bound > GUARD[key]:
            raise GuardTripped(f"{key}={bound} exceeds the guard {GUARD[key]}")
    for p in primes_upto(max_p):
        for h in range(max_h + 1):
            handle_choices = [(0,) * (2 * h)]
            if h:
                handle_choices.append((1,) + (0,) * (2 * h - 1))
            for n in range(max_n + 1):
                for mon in combinations_with_replacement(range(1, p), n):
                    if sum(mon) % p:
                        continue
                    for hand in handle_choices:
                        b = BranchData(p, h, mon, hand)
                        try:
                            g = validate_and_genus(b)
                        except InvalidBranchData:
                            continue
                        if g <= MAX_GENUS:
                            yield b


def sweep(max_p: int, max_h: int, max_n: int, fail_fast: bool = False,
          timings: bool = False) -> list[Report]:
    out = []
    for b in sweep_data(max_p, max_h, max_n):
        rep = analyse(b, timings)
        out.append(rep)
        if fail_fast and not rep.passed:
            break
    return out


# -- seeded property checks ------------------------------------------------------

def random_datum(rng: random.Random) -> BranchData:
    while True:
        p = rng.choice([2, 3, 5])
        h = rng.randint(0, 1)
        n = rng.randint(0, 6)
        mon = [rng.randrange(1, p) for _ in range(n)]
        hand = [rng.randrange(p) for _ in range(2 * h)]
        b = BranchData(p, h, tuple(mon), tuple(hand))
        try:
            if validate_and_genus(b) <= 4:
                return b
        except InvalidBranchData:
            continue


def property_checks(seed: int, rounds: int = 12) -> list[tuple[str, str, bool]]:
    """(check name, datum, verdict) for randomly drawn data and elements."""
    rng = random.Random(seed)
    out = []
    for _ in range(rounds):
        b = random_datum(rng)
        C = cover(b)
        name = str(b)
        out.append(("sigma_order_p", name, (C.sigma ** b.p).is_identity()))
        out.append(("lefschetz", name, 2 - C.sigma.trace() == b.n))
        E = C.level1
        els = [E.element(tuple(rng.randint(-3, 3) for _ in range(E.module.rank)), rng.randrange(b.p))
               for _ in range(3)]
        x, y, z = els
        out.append(("level1_associative", name,
                    E.multiply(E.multiply(x, y), z) == E.multiply(x, E.multiply(y, z))))
        if b.n >= 2:
            out.append(("h1_dimension", name, C.h1.dimension == b.n - 2))
            out.append(("thm47", name, verify_thm47(b).passed))
            if C.genus >= 2:
                E2 = C.level2
                q = C.class2
                els2 = [E2.element(q.element(tuple(rng.randint(-2, 2) for _ in range(q.rank)),
                                             tuple(rng.randint(-2, 2) for _ in range(q.layer_rank))),
                                   rng.randrange(b.p)) for _ in range(3)]
                x, y, z = els2
                out.append(("level2_associative", name,
                            E2.multiply(E2.multiply(x, y), z) == E2.multiply(x, E2.multiply(y, z))))
                classes = list(C.h1.elements())
                if classes:
                    a, c = rng.choice(classes), rng.choice(classes)
                    lhs = C.delta2(a + c)
                    rhs = C.delta2(a) + C.delta2(c) + _cup(C, a, c)
                    out.append(("quadraticity", name, lhs == rhs))
        else:
            out.append(("free_obstruction", name, verify_prop44(b).passed))
    return out


def _cup(C, a, c):
    from .gcohom import cup_v
    return cup_v(a, c, C.class2.bracket, C.level2.layer_h2)


# -- entry point ----------------------------------------------------------------------

def run(config: RunConfig) -> list[Report]:
    if config.mode == "single":
        return [analyse(config.datum, config.timings)]
    if config.mode == "sweep":
        return sweep(config.max_p, config.max_h, config.max_n, config.fail_fast, config.timings)
    raise ValueError("proptest mode produces check lines, not reports")


def _residues(s: str | None) -> tuple[int, ...]:
    if not s:
        return ()
    return tuple(int(x) for x in s.split(","))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilsection", description=__doc__)
    ap.add_argument("--mode", choices=["single", "sweep", "proptest"], default="single")
    ap.add_argument("--p", type=int)
    ap.add_argument("--h", type=int, default=0)
    ap.add_argument("--monodromies", help="comma-separated residues e_1,...,e_n")
    ap.add_argument("--handles", help="comma-separated residues for a_1,b_1,...,a_h,b_h")
    ap.add_argument("--max-p", type=int)
    ap.add_argument("--max-h", type=int)
    ap.add_argument("--max-n", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=["text", "json-lines"], default="text")
    ap.add_argument("--fail-fast", action="store_true")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        datum = None
        if args.mode == "single":
            if args.p is None:
                raise ValueError("single mode needs --p")
            datum = BranchData(args.p, args.h, _residues(args.monodromies), _residues(args.handles))
            validate_and_genus(datum)
        config = RunConfig(args.mode, datum, args.max_p, args.max_h, args.max_n, args.seed,
                           args.format, args.fail_fast, args.timings)
    except (ValueError, InvalidBranchData) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID

    try:
        if config.mode == "proptest":
            checks = property_checks(config.seed)
            ok = True
            for name, datum_s, verdict in checks:
                ok &= verdict
                if config.output_format == "json-lines":
                    print(json.dumps({"check": name, "datum": datum_s, "passed": verdict}))
                else:
                    print(f"{'pass' if verdict else 'FAIL'} {name} [{datum_s}]")
                if config.fail_fast and not verdict:
                    break
            return EXIT_OK if ok else EXIT_FAIL
        reports = run(config)
    except (GuardTripped, OracleTooLarge) as e:
        print(f"guard tripped: {e}", file=sys.stderr)
        return EXIT_GUARD

    for rep in reports:
        print(rep.to_json() if config.output_format == "json-lines" else rep.to_text())
    if config.output_format == "text" and config.mode == "sweep":
        failed = sum(not r.passed for r in reports)
        print(f"{len(reports)} configurations, {failed} failing")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

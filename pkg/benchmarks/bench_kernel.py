"""Timing harness for the grid kernels.

Builds a synthetic reasoning program (parallel causal chains with property
rules, preclusions, and priorities layered on top), encodes it once, then
times the pure-Python and compiled kernels on identical inputs. Both must
produce identical grids before any timing is reported.

Usage: python3 benchmarks/bench_kernel.py [--chains N] [--length N]
                                          [--horizon N] [--repeats N]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

from starling.engine import classify_concept, semantics
from starling.engine.encode import encode_program
from starling.engine import kernel_py
from starling.ground import ground_domain
from starling.lang import parse_domain


def make_source(chains: int, length: int, horizon: int) -> str:
    lines = []
    fluents = ", ".join(f"f{i}_{j}(_)" for i in range(chains) for j in range(length))
    lines.append(f"fluents([{fluents}, mood(_)]).")
    lines.append("s(0) :: mood(x) at 0.")
    lines.append(f"s(0) :: mood(x) at {horizon}.")
    label = 1
    for i in range(chains):
        lines.append(f"s(0) :: f{i}_0(x) at 0.")
        for j in range(length - 1):
            lines.append(f"c({label}) :: f{i}_{j}(X) causes f{i}_{j + 1}(X).")
            label += 1
        # a property shadowing each chain tail, plus a preclusion and a
        # priority so the dominance paths get exercised too
        lines.append(f"p({label}) :: f{i}_{length - 1}(X) implies mood(X).")
        prop = label
        label += 1
        lines.append(f"r({label}) :: f{i}_0(X), mood(X) precludes f{i}_1(X).")
        lines.append(f"c({label - length}) >> r({label}).")
        lines.append(f"p({prop}) >> r({label}).")
        label += 1
    return "\n".join(lines) + "\n"


def encode(source: str):
    domain, diagnostics = parse_domain(source)
    if diagnostics:
        raise SystemExit(f"synthetic program failed to parse: {diagnostics[0]}")
    g = ground_domain(domain)
    concepts = semantics._concept_inventory(g, ())
    kinds = {c: classify_concept(domain, c) for c in concepts}
    present = set(concepts)
    rules = [
        r
        for r in g.rules
        if r.head.atom in present and all(lit.atom in present for lit in r.body)
    ]
    horizon = semantics.compute_horizon(domain)
    return encode_program(
        concepts, kinds, list(g.observations), rules, g.priorities, horizon
    )


def bench(run, enc, repeats: int) -> list[float]:
    run(enc)  # warm-up
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        run(enc)
        samples.append(time.perf_counter() - t0)
    return samples


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--chains", type=int, default=12)
    ap.add_argument("--length", type=int, default=10)
    ap.add_argument("--horizon", type=int, default=60)
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args(argv)

    try:
        from starling.engine import _kernel
    except ImportError:
        print("compiled kernel not built; run pip install -e . first", file=sys.stderr)
        return 1

    enc = encode(make_source(args.chains, args.length, args.horizon))
    print(
        f"program: {enc.n_concepts} concepts, {len(enc.rules)} ground rules, "
        f"horizon {enc.horizon}, sweep budget {enc.budget}"
    )

    pure_out = kernel_py.run_grid(enc)
    fast_out = _kernel.run_grid(enc)
    for name, a, b in zip(
        ("values", "prov_kind", "prov_rule", "status", "fail_t"), pure_out, fast_out
    ):
        same = (a == b).all() if hasattr(a, "all") else a == b
        if not same:
            print(f"kernel outputs differ on {name}; refusing to time", file=sys.stderr)
            return 1
    print("kernels agree on the full grid")

    pure = bench(kernel_py.run_grid, enc, args.repeats)
    fast = bench(_kernel.run_grid, enc, args.repeats)
    for name, samples in (("pure", pure), ("compiled", fast)):
        print(
            f"{name:>8}: best {min(samples) * 1e3:8.2f} ms   "
            f"mean {statistics.mean(samples) * 1e3:8.2f} ms   "
            f"({args.repeats} runs)"
        )
    print(f"speedup (best/best): {min(pure) / min(fast):.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

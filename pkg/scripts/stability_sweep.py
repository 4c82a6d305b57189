"""Random module pairs: bottleneck distance, the interleaving built from its witness,
and how often induced matchings strictly improve (co)kernel triviality.

    python scripts/stability_sweep.py --pairs 200 --seed 0
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass, fields

from barcat.barc_category import cokernel, kernel, triviality_threshold
from barcat.generate import random_module, random_morphism
from barcat.interleave import bottleneck_distance, is_delta_matching, to_delta_matching
from barcat.intervals import INF
from barcat.persistence import (
    build_interleaving_from_matching,
    check_module_interleaving,
    cokernel_module,
    induced_matching,
    kernel_module,
)


@dataclass
class SweepConfig:
    pairs: int = 100
    max_bars: int = 6
    top: int = 8
    p_inf: float = 0.1
    field: int = 2
    seed: int = 0


def parse_config() -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=type(f.default), default=f.default)
    return SweepConfig(**vars(ap.parse_args()))


def run(cfg: SweepConfig) -> Counter:
    rng = random.Random(cfg.seed)
    stats = Counter()
    for _ in range(cfg.pairs):
        M = random_module(rng, cfg.max_bars, cfg.top, cfg.p_inf, prefix="m", min_bars=1)
        N = random_module(rng, cfg.max_bars, cfg.top, cfg.p_inf, prefix="n", min_bars=1)
        res = bottleneck_distance(M.bars, N.bars)
        if res.value == INF:
            stats["infinite distance"] += 1
        else:
            f, g = build_interleaving_from_matching(M, N, res.witness, res.value, cfg.field)
            stats["interleaving verified"] += check_module_interleaving(M, N, res.value, f, g)
            stats["induced matching is delta-matching"] += is_delta_matching(
                to_delta_matching(induced_matching(f), res.value), res.value)
            stats["finite distance"] += 1
        h = random_morphism(rng, M, N, cfg.field)
        X = induced_matching(h)
        for name, mod, bar in (("kernel", kernel_module(h).bars, kernel(X)[0]),
                               ("cokernel", cokernel_module(h).bars, cokernel(X)[0])):
            if triviality_threshold(bar)[0] < triviality_threshold(mod)[0]:
                stats[f"{name} threshold strictly drops"] += 1
    return stats


def main():
    cfg = parse_config()
    start = time.perf_counter()
    stats = run(cfg)
    print(f"{cfg}")
    for key in sorted(stats):
        print(f"  {key:40s} {stats[key]}")
    print(f"  elapsed {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()

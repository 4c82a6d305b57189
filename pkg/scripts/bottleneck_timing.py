"""Wall time of the exact bottleneck distance as barcodes grow."""

import argparse
import random
import time
from dataclasses import dataclass

from barcat.barcode import Barcode
from barcat.generate import random_interval
from barcat.interleave import bottleneck_distance


@dataclass
class TimingConfig:
    sizes: tuple = (10, 20, 40, 80)
    repeats: int = 3
    seed: int = 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(TimingConfig.sizes))
    ap.add_argument("--repeats", type=int, default=TimingConfig.repeats)
    ap.add_argument("--seed", type=int, default=TimingConfig.seed)
    args = ap.parse_args()
    cfg = TimingConfig(tuple(args.sizes), args.repeats, args.seed)
    rng = random.Random(cfg.seed)
    print("size  seconds  d_B")
    for n in cfg.sizes:
        best, value = float("inf"), None
        for _ in range(cfg.repeats):
            C = Barcode(tuple((f"c{i}", random_interval(rng)) for i in range(n)))
            D = Barcode(tuple((f"d{i}", random_interval(rng)) for i in range(n)))
            t = time.perf_counter()
            value = bottleneck_distance(C, D).value
            best = min(best, time.perf_counter() - t)
        print(f"{n:4d}  {best:7.3f}  {value}")


if __name__ == "__main__":
    main()

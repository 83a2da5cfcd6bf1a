"""Tabulate separating prime powers for the sqrt-interval Golomb system.

For every pair 0 <= a < b <= bound prints the least (p, r) with a and b in
distinct open cosets mod p^r, and summarizes which primes occur.
"""

import argparse
import json
from collections import Counter
from dataclasses import asdict, dataclass

from pcl.golomb import GolombSystemSpec, KirchFunction, hausdorff_witness, validate_hausdorff


@dataclass
class Config:
    bound: int = 100
    prime_bound: int = 1000
    kappa: str = "inf"
    rule: str = "sqrt_interval"
    dump: bool = False


def main(cfg: Config) -> dict:
    spec = GolombSystemSpec(cfg.rule)
    kappa = KirchFunction(cfg.kappa)
    rows, missing = [], []
    for a in range(cfg.bound + 1):
        for b in range(a + 1, cfg.bound + 1):
            w = hausdorff_witness(spec, kappa, a, b, cfg.prime_bound)
            if w is None:
                missing.append([a, b])
                continue
            assert validate_hausdorff(spec, kappa, a, b, *w)
            rows.append([a, b, *w])
    summary = {
        "config": asdict(cfg),
        "pairs": len(rows) + len(missing),
        "missing": missing[:20],
        "prime_powers": {f"{p}^{r}": c for (p, r), c in sorted(Counter((p, r) for _, _, p, r in rows).items())},
        "largest_prime": max((p for _, _, p, _ in rows), default=None),
    }
    if cfg.dump:
        summary["rows"] = rows
    return summary


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(Config()).items():
        if isinstance(default, bool):
            ap.add_argument(f"--{name.replace('_', '-')}", action="store_true")
        else:
            ap.add_argument(f"--{name.replace('_', '-')}", type=type(default), default=default)
    print(json.dumps(main(Config(**vars(ap.parse_args()))), indent=2))

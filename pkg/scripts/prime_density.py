"""Empirical prime densities in progressions against the Golomb measure 1/phi(b)."""

import argparse
import json
from dataclasses import asdict, dataclass, field
from math import gcd

from pcl.profinite import decimal12, empirical_prime_density, golomb_pi_measure


@dataclass
class Config:
    moduli: list[int] = field(default_factory=lambda: [3, 4, 5, 8, 10, 12])
    checkpoints: list[int] = field(default_factory=lambda: [10**3, 10**4, 10**5, 10**6])


def main(cfg: Config) -> list[dict]:
    rows = []
    for b in cfg.moduli:
        for a in range(b):
            if gcd(a, b) != 1:
                continue
            measure = golomb_pi_measure(a, b)
            for t in cfg.checkpoints:
                d = empirical_prime_density(a, b, t)
                rows.append({
                    "a": a, "b": b, "t": t, "count": d.count,
                    "relative": decimal12(d.relative),
                    "error": decimal12(abs(d.relative - measure)),
                })
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--moduli", type=int, nargs="+", default=Config().moduli)
    ap.add_argument("--checkpoints", type=int, nargs="+", default=Config().checkpoints)
    args = ap.parse_args()
    cfg = Config(args.moduli, args.checkpoints)
    print(json.dumps({"config": asdict(cfg), "rows": main(cfg)}, indent=2))

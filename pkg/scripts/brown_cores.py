"""Indiscrete cores of the named coset topologies, level by level.

Counts levels where the core of each family differs from the expected
arithmetic set (nilpotents for Golomb and Kirch, units for Szczuka and
Rizza) and reports core sizes for a few sample levels.
"""

import argparse
import json
from dataclasses import asdict, dataclass
from math import gcd

from pcl.finite_topology import indiscrete_core
from pcl.peiji import FamilySpec, topology_at

EXPECTED = {
    "golomb": "nilpotents",
    "kirch": "nilpotents",
    "szczuka": "units",
    "rizza": "units",
}


@dataclass
class Config:
    max_n: int = 500
    samples: tuple[int, ...] = (12, 72, 210, 360)


def arithmetic(kind: str, n: int) -> set[int]:
    if kind == "units":
        return {x for x in range(n) if gcd(x, n) == 1}
    k = n.bit_length()
    return {x for x in range(n) if pow(x, k, n) == 0}


def main(cfg: Config) -> dict:
    mismatches = {fam: [] for fam in EXPECTED}
    for n in range(1, cfg.max_n + 1):
        for fam, kind in EXPECTED.items():
            core = set(indiscrete_core(topology_at(FamilySpec(fam), n)))
            if core != arithmetic(kind, n):
                mismatches[fam].append(n)
    samples = {
        n: {fam: indiscrete_core(topology_at(FamilySpec(fam), n)).members()[:12] for fam in EXPECTED}
        for n in cfg.samples
    }
    return {"config": asdict(cfg), "mismatches": mismatches, "samples": samples}


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--samples", type=int, nargs="+", default=list(Config.samples))
    args = ap.parse_args()
    print(json.dumps(main(Config(args.max_n, tuple(args.samples))), indent=2))

"""Greedy squarefree approximations of abundancy targets.

Shows how many primes the greedy rule needs and the exact error reached,
illustrating that the abundancy index of squarefree numbers is dense above 1.
"""

import argparse
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from pcl.supernatural import ApproxError, abundancy, approx_target


@dataclass
class Config:
    targets: list[str] = field(default_factory=lambda: ["11/10", "3/2", "2", "27183/10000", "3", "4"])
    eps: str = "1/10000"
    prime_limit: int = 10**6


def main(cfg: Config) -> list[dict]:
    out = []
    for text in cfg.targets:
        t, eps = Fraction(text), Fraction(cfg.eps)
        try:
            s = approx_target(t, eps, cfg.prime_limit)
        except ApproxError as exc:
            out.append({"target": text, "reached": False, "achieved": float(exc.achieved)})
            continue
        h = abundancy(s)
        primes = s.primes()
        out.append({
            "target": text,
            "reached": True,
            "primes": len(primes),
            "first_primes": primes[:6],
            "largest_prime": primes[-1] if primes else None,
            "error": float(abs(h - t)),
        })
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("targets", nargs="*", default=Config().targets)
    ap.add_argument("--eps", default=Config.eps)
    ap.add_argument("--prime-limit", type=int, default=Config.prime_limit)
    args = ap.parse_args()
    cfg = Config(args.targets, args.eps, args.prime_limit)
    print(json.dumps({"config": asdict(cfg), "results": main(cfg)}, indent=2))

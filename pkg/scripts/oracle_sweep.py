"""Compare the cycle-relation presentation of h_0 with the ray class group.

For each modulus the oracle is run at growing height bounds; the table shows
when the presented group collapses to the ray class group over Q.
"""

import argparse
from dataclasses import dataclass

from arithhom.cycles import oracle_h0
from arithhom.numfield import number_field
from arithhom.rayclass import modulus, ray_class_group


@dataclass
class SweepConfig:
    moduli: tuple[tuple[int, ...], ...] = ((), (5,), (7,), (2, 3), (3, 5), (11,))
    heights: tuple[int, ...] = (10, 30, 100, 300)
    deg_bound: int = 2
    prime_bound: int = 50


def sweep(cfg: SweepConfig) -> list[dict]:
    Q = number_field("Q")
    rows = []
    for primes in cfg.moduli:
        m = modulus(Q, primes)
        target = ray_class_group(Q, m).group
        for H in cfg.heights:
            r = oracle_h0(Q, m, deg_bound=cfg.deg_bound, height_bound=H, prime_bound=cfg.prime_bound)
            rows.append({"sigma": list(primes), "height": H,
                         "oracle": list(r.group.invariants), "ray_class": list(target.invariants),
                         "relations": r.relations_used, "iso": r.matches_rayclass})
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description="oracle h_0 vs ray class group")
    parser.add_argument("--deg-bound", type=int, default=SweepConfig.deg_bound)
    parser.add_argument("--prime-bound", type=int, default=SweepConfig.prime_bound)
    args = parser.parse_args()
    cfg = SweepConfig(deg_bound=args.deg_bound, prime_bound=args.prime_bound)
    print(f"{'sigma':>10} {'H':>5} {'relations':>9}  {'oracle':<24} {'C_m':<8} iso")
    for row in sweep(cfg):
        print(f"{str(row['sigma']):>10} {row['height']:>5} {row['relations']:>9}  "
              f"{str(row['oracle']):<24} {str(row['ray_class']):<8} {row['iso']}")


if __name__ == "__main__":
    main()

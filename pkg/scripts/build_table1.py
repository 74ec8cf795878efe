"""Search the small-degree rows of the exceptional small-kernel table and freeze witnesses.

For each primitive group V of degree <= 8 in the list and each h in {X^2, X^3, T_3},
every polynomial ramification type of V and every placement of h's branch
points is searched in U wr V.  Groups with small kernel and a unique maximal
block system are kept; one generating tuple per (degree, order, split flag)
is written to a JSON file (default /tmp/table1_search.json).

    python3 scripts/build_table1.py [--out PATH]
"""

import argparse
import json
import time
from pathlib import Path

from verikit.groups import named_group
from verikit.perm_core import CycleType, PermGroup, cyclic_group, is_split_extension, symmetric_group
from verikit.tuple_search import (enumerate_base_tuples, placements, polynomial_types, search,
                                  spec_for_placement)
from verikit.wreath import ImprimitiveFrame, block_kernel, large_kernel, ritt_obstruction

BASES = ["S4", "PGL2(5)", "PSL3(2)", "PGL2(7)", "A5"]
HS = {"X^2": cyclic_group(2), "X^3": cyclic_group(3), "T_3": symmetric_group(3)}
H_TYPES = {"X^2": ["[2]"], "X^3": ["[3]"], "T_3": ["[2.1]", "[2.1]"]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="/tmp/table1_search.json")
    ap.add_argument("--max-degree", type=int, default=16)
    args = ap.parse_args()
    found = {}
    t0 = time.time()
    for vname in BASES:
        V = named_group(vname)
        for hname, U in HS.items():
            if U.degree * V.degree > args.max_degree:
                continue
            hts = [CycleType.parse(t) for t in H_TYPES[hname]]
            for types in polynomial_types(V):
                for base in enumerate_base_tuples(V, types):
                    for pl in placements(base, hts):
                        spec = spec_for_placement(U, base, pl, max_degree=args.max_degree)
                        res = search(spec, with_fingerprint=False, with_kernel=False)
                        for t in res.tuples:
                            G = PermGroup(spec.degree, t.entries)
                            F = ImprimitiveFrame.standard(G, U.degree)
                            if large_kernel(F) or ritt_obstruction(G) != 1:
                                continue
                            gamma = block_kernel(F)
                            split = is_split_extension(G, gamma).status
                            key = (vname, hname, G.order(), split)
                            if key not in found:
                                found[key] = {
                                    "V": vname, "h": hname, "degree": spec.degree,
                                    "order": G.order(), "kernel_order": gamma.order(),
                                    "split": split,
                                    "g_type": [c.notation() for c in types],
                                    "placement": pl.class_label(base, hname),
                                    "tuple": t.cycle_strings(),
                                }
                                print(json.dumps(found[key]), flush=True)
    rows = sorted(found.values(), key=lambda r: (r["degree"], r["order"], r["split"]))
    Path(args.out).write_text(json.dumps({"rows": rows}, indent=1) + "\n")
    print(f"{len(rows)} groups in {time.time() - t0:.1f}s -> {args.out}")


if __name__ == "__main__":
    main()

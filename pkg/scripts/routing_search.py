"""Score every corner-routing table for the face curves against homology invariants.

For each table and each acyclic coorientation of the given grid maps we check
that the monodromy does not depend on the representation, that cohomologous
coorientations give equal characteristic polynomials, and that face curves
are simple walks.  Prints one line per table, best first.
"""
import argparse
import itertools
import sys

from birkhoff import coorient as co
from birkhoff.birkhoff_surface import CORNER_KINDS, corner_kind
from birkhoff.cohomology import class_of, cochain_equivalent
from birkhoff.monodromy import Monodromy, charpoly
from birkhoff.surface_map import grid_map, shipped_map

CHOICES = {
    "alt_sink": ("short", "long"),
    "alt_source": ("short", "long"),
    "nonalt_sink": ("short", "long"),
    "nonalt_source": ("short", "long"),
    "nonalt_plus": ("own", "other"),
    "nonalt_minus": ("own", "other"),
}


def score(maps, table, reps):
    bad_rep = bad_poly = nonsimple = 0
    for m, etas in maps:
        polys = []
        for eta in etas:
            mono = Monodromy(m, eta, table)
            nonsimple += sum(not c.simple for lab, c in mono.curves.items() if lab[0] == "f")
            mats = [mono.matrix(r) for r in co.representations(m, eta, limit=reps)]
            bad_rep += sum(not (x == mats[0]).all() for x in mats[1:])
            polys.append((class_of(m, eta), charpoly(mats[0])))
        for (c1, p1), (c2, p2) in itertools.combinations(polys, 2):
            if cochain_equivalent(m, c1, c2) and p1 != p2:
                bad_poly += 1
    return bad_rep, bad_poly, nonsimple


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--maps", nargs="+", default=["2x3", "2x2"])
    ap.add_argument("--reps", type=int, default=20)
    args = ap.parse_args(argv)
    maps = []
    used = set()
    for name in args.maps:
        m = grid_map(*map(int, name.split("x"))) if "x" in name else shipped_map(name)
        etas = [e for e in co.enumerate_eulerian(m) if co.is_acyclic(m, e)]
        for e in etas:
            for d in range(m.num_darts):
                used.add(corner_kind(m, e, d))
        maps.append((m, etas))
    print("corner kinds present:", sorted(used))
    rows = []
    for combo in itertools.product(*(CHOICES[k] for k in CORNER_KINDS)):
        table = dict(zip(CORNER_KINDS, combo))
        rows.append((score(maps, table, args.reps), combo))
    rows.sort()
    for s, combo in rows:
        print(s, " ".join(combo))
    return 0


if __name__ == "__main__":
    sys.exit(main())

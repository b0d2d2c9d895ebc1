"""Census of the twist-word monodromies on the bundled maps.

For each map: Eulerian and acyclic counts, realizable classes, and per acyclic
class the characteristic polynomial and spectral radius of the return map.
"""
import argparse

from birkhoff import coorient as co
from birkhoff import monodromy as mo
from birkhoff.cohomology import class_of, cochain_equivalent
from birkhoff.surface_map import shipped_map


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("maps", nargs="*", default=["T1", "T6", "G2"])
    args = ap.parse_args(argv)
    for name in args.maps:
        m = shipped_map(name)
        pool = co.enumerate_eulerian(m)
        ac = [e for e in pool if co.is_acyclic(m, e)]
        reps = []
        for e in pool:
            if not any(cochain_equivalent(m, class_of(m, r), class_of(m, e)) for r in reps):
                reps.append(e)
        print(f"{name}: V={m.num_vertices} F={m.num_faces} genus={m.genus} "
              f"eulerian={len(pool)} acyclic={len(ac)} classes={len(reps)}")
        for r in reps:
            members = [e for e in ac if cochain_equivalent(m, class_of(m, r), class_of(m, e))]
            if not members:
                continue
            M = mo.monodromy(m, members[0])
            polys = {tuple(mo.charpoly(mo.monodromy(m, e))) for e in members}
            print(f"  class of {''.join(map(str, r.bits))}: {len(members)} acyclic members, "
                  f"{len(polys)} distinct charpoly, spectral radius {mo.spectral_radius(M):.6f}")
            print(f"    charpoly {list(next(iter(polys)))}")


if __name__ == "__main__":
    main()

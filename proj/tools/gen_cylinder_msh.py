#!/usr/bin/env python3
"""Single-layer O-grid around a unit-diameter cylinder, written as ASCII MSH 2.2.

Patches: wall (r = 0.5), farfield (outer circle), zmin, zmax.
After $EndElements a comment line records the hexahedron count.
"""
import argparse
import math

from scipy.optimize import brentq


def stretch_ratio(first, length, cells):
    # first * (q^n - 1) / (q - 1) = length
    return brentq(lambda q: first * (q**cells - 1.0) / (q - 1.0) - length, 1.0 + 1e-9, 2.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output")
    ap.add_argument("--around", type=int, default=126, help="cells around the cylinder")
    ap.add_argument("--radial", type=int, default=75, help="cells from wall to far field")
    ap.add_argument("--outer-diameter", type=float, default=96.0)
    ap.add_argument("--first", type=float, default=1.0 / 96.0, help="wall-normal size of the first cell")
    ap.add_argument("--span", type=float, default=0.1)
    a = ap.parse_args()

    r0, r1 = 0.5, 0.5 * a.outer_diameter
    q = stretch_ratio(a.first, r1 - r0, a.radial)
    radii = [r0]
    h = a.first
    for _ in range(a.radial):
        radii.append(radii[-1] + h)
        h *= q
    radii[-1] = r1

    nt, nr = a.around, a.radial
    def node(i, j, k):  # i radial, j around (periodic), k layer
        return 1 + (i + (nr + 1) * ((j % nt) + nt * k))

    nodes = []
    for k in range(2):
        for j in range(nt):
            t = 2.0 * math.pi * j / nt
            for i in range(nr + 1):
                nodes.append((radii[i] * math.cos(t), radii[i] * math.sin(t), k * a.span))

    tags = {"wall": 1, "farfield": 2, "zmin": 3, "zmax": 4, "fluid": 5}
    elements = []
    for j in range(nt):
        for i in range(nr):
            b = [node(i, j, 0), node(i + 1, j, 0), node(i + 1, j + 1, 0), node(i, j + 1, 0)]
            t = [node(i, j, 1), node(i + 1, j, 1), node(i + 1, j + 1, 1), node(i, j + 1, 1)]
            elements.append((5, tags["fluid"], b + t))
    nhex = len(elements)
    for j in range(nt):
        elements.append((3, tags["wall"], [node(0, j, 0), node(0, j + 1, 0), node(0, j + 1, 1), node(0, j, 1)]))
        elements.append((3, tags["farfield"], [node(nr, j, 0), node(nr, j, 1), node(nr, j + 1, 1), node(nr, j + 1, 0)]))
        for i in range(nr):
            elements.append((3, tags["zmin"], [node(i, j, 0), node(i, j + 1, 0), node(i + 1, j + 1, 0), node(i + 1, j, 0)]))
            elements.append((3, tags["zmax"], [node(i, j, 1), node(i + 1, j, 1), node(i + 1, j + 1, 1), node(i, j + 1, 1)]))

    with open(a.output, "w") as f:
        f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        f.write("$PhysicalNames\n%d\n" % len(tags))
        for name, tag in tags.items():
            f.write('%d %d "%s"\n' % (3 if name == "fluid" else 2, tag, name))
        f.write("$EndPhysicalNames\n")
        f.write("$Nodes\n%d\n" % len(nodes))
        for n, (x, y, z) in enumerate(nodes, 1):
            f.write("%d %.15g %.15g %.15g\n" % (n, x, y, z))
        f.write("$EndNodes\n")
        f.write("$Elements\n%d\n" % len(elements))
        for n, (etype, tag, conn) in enumerate(elements, 1):
            f.write("%d %d 2 %d %d %s\n" % (n, etype, tag, tag, " ".join(map(str, conn))))
        f.write("$EndElements\n")
        f.write("// volume elements: %d\n" % nhex)
    print("wrote %s: %d hexahedra, stretch ratio %.6f" % (a.output, nhex, q))


if __name__ == "__main__":
    main()

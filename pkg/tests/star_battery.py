"""Stars and series shared by the enumeration and acceptance tests."""

from toricgwpt.geometry import ElementaryGeometry
from toricgwpt.poset_enum import four_valent_star
from toricgwpt.series_engine import linear_star_series, principal_pt
from toricgwpt.stars_complexes import ChowOneComplex, ComplexRay, Edge, Star, Vertex

G = ElementaryGeometry


def fb(*rays):
    return Star.full_boundary(rays)


def star_battery() -> list[Star]:
    one_nb = G.one_non_boundary("straight")
    return [
        fb((1, 0, 0), (0, 1, 0), (-1, -1, 0)),
        fb(((1, 0, 0), 2), ((0, 1, 0), 2), ((-1, -1, 0), 2)),
        fb(((1, 0, 0), 1), ((0, 1, 0), 2), ((-1, -2, 0), 1)),
        fb((1, 0, 0), (-1, 0, 0)),
        fb((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)),
        fb((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
        fb(((1, 0, 0), 2), (0, 1, 0), (0, 0, 1), (-2, -1, -1)),
        fb((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, -1)),
        fb(((1, 1, 0), 1), ((1, -1, 0), 1), ((-1, 0, 1), 2), ((0, 0, -1), 2)),
        *[four_valent_star(n) for n in range(1, 7)],
        Star(one_nb, (0, 0, 0), (((1, 0, 0), 1), ((0, 1, 0), 1), ((-1, -1, 0), 1))),
        Star(one_nb, (0, 0, 0), (((1, 0, 0), 1), ((-1, 0, 0), 1), ((0, 1, 0), 1), ((0, -1, 0), 1))),
        Star(one_nb, (0, 0, 0), (((1, 0, 1), 1), ((-1, 0, 1), 1), ((0, 1, 0), 1), ((0, -1, 0), 1))),
        Star(one_nb, (0, 0, 2), (((1, 0, 1), 1), ((-1, 0, -1), 1), ((0, 1, 0), 1), ((0, -1, 0), 1))),
        Star(G.three_non_boundary(), (0, 0, 0), (((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1))),
        Star(G.three_non_boundary(), (2, 2, 2), (((1, 0, 0), 1), ((0, 1, 0), 1), ((-1, -1, 0), 1))),
        Star(G.two_non_boundary("straight"), (0, 1, 1),
             (((1, 0, 0), 1), ((-1, 0, 0), 1), ((0, 1, 1), 1), ((0, -1, -1), 1))),
    ]


def straight_line_counterexamples() -> list[ChowOneComplex]:
    """Unstable complexes whose vertices all sit on one straight line."""
    full = G.full_boundary()
    out = []
    for d, weight, points in [
        ((1, 0, 0), 1, [(0, 0, 0), (1, 0, 0)]),
        ((1, 0, 0), 3, [(0, 0, 0), (2, 0, 0), (5, 0, 0)]),
        ((1, 2, 3), 2, [(0, 0, 0), (1, 2, 3)]),
        ((0, 1, -1), 1, [(0, 0, 0), (0, "1/2", "-1/2"), (0, 4, -4)]),
    ]:
        n = len(points)
        verts = [Vertex(p) for p in points]
        edges = [Edge((i, i + 1), weight) for i in range(n - 1)]
        back = tuple(-x for x in d)
        rays = [ComplexRay(0, back, weight), ComplexRay(n - 1, d, weight)]
        out.append(ChowOneComplex(full, verts, edges, rays))
    g = G.one_non_boundary("straight")
    out.append(ChowOneComplex(g, [Vertex((0, 0, 0)), Vertex((3, 0, 0))], [Edge((0, 1), 1)],
                              [ComplexRay(0, (-1, 0, 0), 1), ComplexRay(1, (1, 0, 0), 1)]))
    return out


def glue_battery():
    """(side, vertex series, partition vector) triples for the gluing checks."""
    cases = []
    for d in range(1, 6):
        cases.append(([linear_star_series("pt", d), linear_star_series("pt", d)], ((d,),)))
    for n1 in range(1, 5):
        for n2 in range(1, 5):
            cases.append(([principal_pt(n1), principal_pt(n2)], ((1,),)))
            cases.append(([principal_pt(n1), principal_pt(n2)], ((1,), (1,))))
            cases.append(([principal_pt(n1), linear_star_series("pt", n2)], ((n2,),)))
            cases.append(([principal_pt(n1), linear_star_series("pt", n2)], ((n2,), (1,))))
    cases.append(([principal_pt(2), principal_pt(3), linear_star_series("pt", 2)], ((2, 1), (1,))))
    cases.append(([principal_pt(1)], ()))
    return cases

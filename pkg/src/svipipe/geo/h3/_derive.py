"""Regenerate the H3 lookup tables from icosahedron geometry.

Only face centers, face axis azimuths and base-cell home coordinates are
taken as given.  Everything else (base cell per face coordinate, the 60-degree
rotation into each base cell's home frame, pentagon clockwise-offset faces,
and face-neighbour unfolding transforms) follows from the geometry:

* a base cell's rotation from face ``f`` is the angle between ``f``'s grid
  axes and the home face's grid axes at the base cell center, in 60-degree
  steps;
* around a pentagon the five faces each see one 72-degree sector, so the
  rotation counts pentagon steps (which skip the deleted k-axis sector);
* the neighbour across an edge is unfolded so that the neighbour's center
  lands at twice the edge midpoint.

``python -m svipipe.geo.h3._derive`` prints the generated ``_tables`` module.
"""

import math

from . import _ijk
from ._constants import (
    BASE_CELL_HOME,
    FACE_AXES_AZ_CII,
    FACE_CENTER_GEO,
    FACE_CENTER_POINT,
    IJ,
    JK,
    KI,
    NUM_ICOSA_FACES,
    PENTAGON_BASE_CELLS,
    RES0_U_GNOMONIC,
)

# digit sequence of a pentagon's five sectors, ccw, starting at the home face wedge
_PENT_SECTORS = (3, 5, 4, 6, 2)
# wedge digit of a face, keyed by where the pentagon vertex sits in that face's coordinates
_WEDGE_DIGIT = {(2, 0, 0): 3, (0, 2, 0): 5, (0, 0, 2): 6}
_EDGE_MIDPOINT = {IJ: (1, 1, 0), KI: (1, 0, 1), JK: (0, 1, 1)}


def _xyz(lat, lng):
    return (math.cos(lat) * math.cos(lng), math.cos(lat) * math.sin(lng), math.sin(lat))


def _face_point(face, ijk):
    x, y = _ijk.to_hex2d(ijk)
    return _ijk.hex2d_to_geo(x, y, face, 0, False)


def _gnomonic(face, lat, lng):
    """Inverse of ``_face_point`` for an arbitrary face (resolution 0 units)."""
    v = _xyz(lat, lng)
    c = FACE_CENTER_POINT[face]
    cosr = max(-1.0, min(1.0, sum(a * b for a, b in zip(v, c))))
    r = math.acos(cosr)
    if r < 1e-16:
        return 0.0, 0.0
    clat, clng = FACE_CENTER_GEO[face]
    theta = _ijk.pos_angle(FACE_AXES_AZ_CII[face] - _ijk.pos_angle(_ijk.geo_azimuth(clat, clng, lat, lng)))
    rr = math.tan(r) / RES0_U_GNOMONIC
    return rr * math.cos(theta), rr * math.sin(theta)


def _i_axis_azimuth(face, lat, lng):
    x, y = _gnomonic(face, lat, lng)
    lat2, lng2 = _ijk.hex2d_to_geo(x + 1e-6, y, face, 0, False)
    return _ijk.geo_azimuth(lat, lng, lat2, lng2)


def frame_rotation(src_face, dst_face, lat, lng):
    """Signed ccw 60-degree steps taking ``src_face`` coordinates to ``dst_face`` at a point."""
    d = math.degrees(_i_axis_azimuth(dst_face, lat, lng) - _i_axis_azimuth(src_face, lat, lng))
    d = (d + 180.0) % 360.0 - 180.0
    return d / 60.0


def base_cell_centers():
    return [_face_point(f, ijk) for f, ijk in BASE_CELL_HOME]


def base_cell_faces(bc, centers=None):
    """Every (face, ijk) at which base cell ``bc`` sits on the res-0 grid of a face."""
    centers = centers or base_cell_centers()
    target = _xyz(*centers[bc])
    out = []
    for f in range(NUM_ICOSA_FACES):
        for ijk in ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1),
                    (1, 0, 1), (2, 0, 0), (0, 2, 0), (0, 0, 2)):
            p = _xyz(*_face_point(f, ijk))
            if sum((a - b) ** 2 for a, b in zip(p, target)) < 1e-18:
                out.append((f, ijk))
    return out


def _nearest_base_cell(lat, lng, centers_xyz):
    v = _xyz(lat, lng)
    best, best_d = -1, 10.0
    for n, c in enumerate(centers_xyz):
        d = (c[0] - v[0]) ** 2 + (c[1] - v[1]) ** 2 + (c[2] - v[2]) ** 2
        if d < best_d:
            best, best_d = n, d
    return best


def pentagon_rotation(bc, face, centers=None):
    centers = centers or base_cell_centers()
    lat, lng = centers[bc]
    reps = dict(base_cell_faces(bc, centers))
    home = BASE_CELL_HOME[bc][0]
    az = {f: _ijk.geo_azimuth(lat, lng, *FACE_CENTER_GEO[f]) for f in reps}
    # ccw seen from outside the sphere is decreasing azimuth
    ordered = sorted(reps, key=lambda f: (az[home] - az[f]) % (2 * math.pi))
    steps = ordered.index(face)
    return (steps - _PENT_SECTORS.index(_WEDGE_DIGIT[reps[face]])) % 5


def cw_offset_faces(bc, centers=None):
    if bc not in PENTAGON_BASE_CELLS:
        return (0, 0)
    faces = [f for f, ijk in base_cell_faces(bc, centers) if ijk == (0, 2, 0)]
    return tuple(faces) if faces else (-1, -1)


def face_ijk_base_cells():
    centers = base_cell_centers()
    centers_xyz = [_xyz(*c) for c in centers]
    table = []
    for f in range(NUM_ICOSA_FACES):
        face_rows = []
        for i in range(3):
            row = []
            for j in range(3):
                col = []
                for k in range(3):
                    ijk = _ijk.normalize(i, j, k)
                    bc = _nearest_base_cell(*_face_point(f, ijk), centers_xyz)
                    home = BASE_CELL_HOME[bc][0]
                    if home == f:
                        rot = 0
                    elif bc in PENTAGON_BASE_CELLS:
                        rot = pentagon_rotation(bc, f, centers)
                    else:
                        rot = round(frame_rotation(f, home, *centers[bc])) % 6
                    col.append((bc, rot))
                row.append(tuple(col))
            face_rows.append(tuple(row))
        table.append(tuple(face_rows))
    return tuple(table)


def face_neighbors():
    """Per face: ((self), IJ, KI, JK) neighbour as (face, translate ijk, ccw rotations)."""
    out = []
    for f in range(NUM_ICOSA_FACES):
        entries = [(f, (0, 0, 0), 0)]
        for direction in (IJ, KI, JK):
            mid = _EDGE_MIDPOINT[direction]
            lat, lng = _face_point(f, mid)
            beyond = _face_point(f, _ijk.scale(mid, 2))
            g = min(
                range(NUM_ICOSA_FACES),
                key=lambda h: sum((a - b) ** 2 for a, b in zip(_xyz(*beyond), FACE_CENTER_POINT[h])),
            )
            rot = round(frame_rotation(f, g, lat, lng)) % 6
            centre = _ijk.scale(mid, 2)
            for _ in range(rot):
                centre = _ijk.rotate60ccw(centre)
            translate = _ijk.normalize(-centre[0], -centre[1], -centre[2])
            entries.append((g, translate, rot))
        out.append(tuple(entries))
    return tuple(out)


def adjacent_face_dir(neighbors):
    out = []
    for f in range(NUM_ICOSA_FACES):
        row = [-1] * NUM_ICOSA_FACES
        row[f] = 0
        for direction in (IJ, KI, JK):
            row[neighbors[f][direction][0]] = direction
        out.append(tuple(row))
    return tuple(out)


def render_tables():
    neighbors = face_neighbors()
    centers = base_cell_centers()
    lines = [
        '"""Generated by ``python -m svipipe.geo.h3._derive``; do not edit."""',
        "",
        "# [face][i][j][k] -> (base cell, ccw 60-degree rotations into the base cell's home frame)",
        "FACE_IJK_BASE_CELLS = (",
    ]
    for face_rows in face_ijk_base_cells():
        lines.append("    (")
        for row in face_rows:
            lines.append("        " + repr(row) + ",")
        lines.append("    ),")
    lines.append(")")
    lines.append("")
    lines.append("# [face][central, IJ, KI, JK] -> (neighbour face, translate ijk, ccw rotations)")
    lines.append("FACE_NEIGHBORS = (")
    for row in neighbors:
        lines.append("    " + repr(row) + ",")
    lines.append(")")
    lines.append("")
    lines.append("ADJACENT_FACE_DIR = (")
    for row in adjacent_face_dir(neighbors):
        lines.append("    " + repr(row) + ",")
    lines.append(")")
    lines.append("")
    lines.append("# pentagon base cell -> faces on which a leading k-axis digit rotates clockwise")
    lines.append("BASE_CELL_CW_OFFSET = {")
    for bc in sorted(PENTAGON_BASE_CELLS):
        lines.append(f"    {bc}: {cw_offset_faces(bc, centers)!r},")
    lines.append("}")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    print(render_tables(), end="")

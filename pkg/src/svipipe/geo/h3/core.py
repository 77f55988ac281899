"""H3 cell indexing: point to cell, cell to center/boundary, hierarchy.

Cells are plain 64-bit integers.  Latitudes and longitudes are in degrees at
this API boundary and radians inside.
"""

import math

from . import _ijk
from ._constants import (
    BASE_CELL_HOME,
    IJ,
    IK_AXES_DIGIT,
    I_AXES_DIGIT,
    JK,
    K_AXES_DIGIT,
    KI,
    M_SQRT3_2,
    MAX_DIM_BY_CII_RES,
    MAX_FACE_COORD,
    MAX_H3_RES,
    NUM_BASE_CELLS,
    PENTAGON_BASE_CELLS,
    UNIT_SCALE_BY_CII_RES,
)
from ._tables import ADJACENT_FACE_DIR, BASE_CELL_CW_OFFSET, FACE_IJK_BASE_CELLS, FACE_NEIGHBORS

H3_CELL_MODE = 1
_H3_INIT = 0x00001FFFFFFFFFFF
_MODE_OFFSET = 59
_RES_OFFSET = 52
_BC_OFFSET = 45
_DIGIT_MASK = 7

NO_OVERAGE = 0
FACE_EDGE = 1
NEW_FACE = 2


class H3Error(ValueError):
    pass


# --- bit fields -----------------------------------------------------------

def get_resolution(h):
    return (h >> _RES_OFFSET) & 0xF


def get_base_cell(h):
    return (h >> _BC_OFFSET) & 0x7F


def _get_digit(h, r):
    return (h >> ((MAX_H3_RES - r) * 3)) & _DIGIT_MASK


def _set_digit(h, r, d):
    shift = (MAX_H3_RES - r) * 3
    return (h & ~(_DIGIT_MASK << shift)) | (d << shift)


def _leading_nonzero_digit(h):
    for r in range(1, get_resolution(h) + 1):
        d = _get_digit(h, r)
        if d:
            return d
    return 0


_ROT_CCW = (0, 5, 3, 1, 6, 4, 2)
_ROT_CW = (0, 3, 6, 2, 5, 1, 4)


def _rotate60ccw(h):
    for r in range(1, get_resolution(h) + 1):
        h = _set_digit(h, r, _ROT_CCW[_get_digit(h, r)])
    return h


def _rotate60cw(h):
    for r in range(1, get_resolution(h) + 1):
        h = _set_digit(h, r, _ROT_CW[_get_digit(h, r)])
    return h


def _rotate_pent60ccw(h):
    found = False
    for r in range(1, get_resolution(h) + 1):
        h = _set_digit(h, r, _ROT_CCW[_get_digit(h, r)])
        if not found and _get_digit(h, r) != 0:
            found = True
            # skip the deleted k-axes subsequence
            if _leading_nonzero_digit(h) == K_AXES_DIGIT:
                h = _rotate60ccw(h)
    return h


def _rotate_pent60cw(h):
    found = False
    for r in range(1, get_resolution(h) + 1):
        h = _set_digit(h, r, _ROT_CW[_get_digit(h, r)])
        if not found and _get_digit(h, r) != 0:
            found = True
            if _leading_nonzero_digit(h) == K_AXES_DIGIT:
                h = _rotate60cw(h)
    return h


def is_pentagon(h):
    return get_base_cell(h) in PENTAGON_BASE_CELLS and _leading_nonzero_digit(h) == 0


def is_valid_cell(h):
    if not isinstance(h, int) or h < 0 or h >> 63:
        return False
    if (h >> _MODE_OFFSET) & 0xF != H3_CELL_MODE:
        return False
    if (h >> 56) & 0x7:
        return False
    bc = get_base_cell(h)
    if bc >= NUM_BASE_CELLS:
        return False
    res = get_resolution(h)
    leading = 0
    for r in range(1, MAX_H3_RES + 1):
        d = _get_digit(h, r)
        if r <= res:
            if d == 7:
                return False
            if not leading and d:
                leading = d
        elif d != 7:
            return False
    if bc in PENTAGON_BASE_CELLS and leading == K_AXES_DIGIT:
        return False
    return True


# --- point -> cell --------------------------------------------------------

def _face_ijk_to_h3(face, ijk, res):
    h = _H3_INIT | (H3_CELL_MODE << _MODE_OFFSET) | (res << _RES_OFFSET)
    if res == 0:
        if max(ijk) > MAX_FACE_COORD:
            raise H3Error("coordinate outside base cell range")
        bc, _ = FACE_IJK_BASE_CELLS[face][ijk[0]][ijk[1]][ijk[2]]
        return h | (bc << _BC_OFFSET)

    for r in range(res - 1, -1, -1):
        last = ijk
        if (r + 1) % 2 == 1:
            ijk = _ijk.up_ap7(ijk)
            center = _ijk.down_ap7(ijk)
        else:
            ijk = _ijk.up_ap7r(ijk)
            center = _ijk.down_ap7r(ijk)
        diff = _ijk.normalize(*_ijk.sub(last, center))
        h = _set_digit(h, r + 1, _ijk.unit_to_digit(diff))

    if max(ijk) > MAX_FACE_COORD:
        raise H3Error("coordinate outside base cell range")
    bc, rots = FACE_IJK_BASE_CELLS[face][ijk[0]][ijk[1]][ijk[2]]
    h |= bc << _BC_OFFSET
    if bc in PENTAGON_BASE_CELLS:
        if _leading_nonzero_digit(h) == K_AXES_DIGIT:
            if face in BASE_CELL_CW_OFFSET[bc]:
                h = _rotate60cw(h)
            else:
                h = _rotate60ccw(h)
        for _ in range(rots):
            h = _rotate_pent60ccw(h)
    else:
        for _ in range(rots):
            h = _rotate60ccw(h)
    return h


def latlng_to_cell(lat, lng, res):
    """H3 cell containing (lat, lng) degrees at resolution ``res``."""
    if not isinstance(res, int) or not 0 <= res <= MAX_H3_RES:
        raise H3Error(f"resolution must be an integer in [0, 15], got {res!r}")
    if not (math.isfinite(lat) and math.isfinite(lng)):
        raise H3Error("non-finite coordinate")
    face, x, y = _ijk.geo_to_hex2d(math.radians(lat), math.radians(lng), res)
    return _face_ijk_to_h3(face, _ijk.from_hex2d(x, y), res)


# --- cell -> face ijk -----------------------------------------------------

def _adjust_overage_class_ii(face, ijk, res, pent_leading4, substrate):
    max_dim = MAX_DIM_BY_CII_RES[res]
    if substrate:
        max_dim *= 3
    total = sum(ijk)
    if substrate and total == max_dim:
        return FACE_EDGE, face, ijk
    if total <= max_dim:
        return NO_OVERAGE, face, ijk

    overage = NEW_FACE
    if ijk[2] > 0:
        if ijk[1] > 0:
            nface, trans, rots = FACE_NEIGHBORS[face][JK]
        else:
            nface, trans, rots = FACE_NEIGHBORS[face][KI]
            if pent_leading4:
                origin = (max_dim, 0, 0)
                ijk = _ijk.add(_ijk.rotate60cw(_ijk.sub(ijk, origin)), origin)
    else:
        nface, trans, rots = FACE_NEIGHBORS[face][IJ]
    for _ in range(rots):
        ijk = _ijk.rotate60ccw(ijk)
    unit = UNIT_SCALE_BY_CII_RES[res] * (3 if substrate else 1)
    ijk = _ijk.normalize(*_ijk.add(ijk, _ijk.scale(trans, unit)))
    if substrate and sum(ijk) == max_dim:
        overage = FACE_EDGE
    return overage, nface, ijk


def _h3_to_face_ijk(h):
    bc = get_base_cell(h)
    if bc >= NUM_BASE_CELLS:
        raise H3Error("invalid base cell")
    if bc in PENTAGON_BASE_CELLS and _leading_nonzero_digit(h) == IK_AXES_DIGIT:
        h = _rotate60cw(h)

    face, ijk = BASE_CELL_HOME[bc]
    res = get_resolution(h)
    possible_overage = not (bc not in PENTAGON_BASE_CELLS and (res == 0 or ijk == (0, 0, 0)))
    for r in range(1, res + 1):
        ijk = _ijk.down_ap7(ijk) if r % 2 == 1 else _ijk.down_ap7r(ijk)
        ijk = _ijk.neighbor(ijk, _get_digit(h, r))
    if not possible_overage:
        return face, ijk

    orig = ijk
    adj_res = res
    if res % 2 == 1:
        ijk = _ijk.down_ap7r(ijk)
        adj_res += 1
    pent_leading4 = bc in PENTAGON_BASE_CELLS and _leading_nonzero_digit(h) == I_AXES_DIGIT
    overage, face, ijk = _adjust_overage_class_ii(face, ijk, adj_res, pent_leading4, False)
    if overage != NO_OVERAGE:
        if bc in PENTAGON_BASE_CELLS:
            while overage != NO_OVERAGE:
                overage, face, ijk = _adjust_overage_class_ii(face, ijk, adj_res, False, False)
        if adj_res != res:
            ijk = _ijk.up_ap7r(ijk)
    elif adj_res != res:
        ijk = orig
    return face, ijk


def cell_to_latlng(h):
    """Center of a cell as (lat, lng) degrees."""
    face, ijk = _h3_to_face_ijk(h)
    x, y = _ijk.to_hex2d(ijk)
    lat, lng = _ijk.hex2d_to_geo(x, y, face, get_resolution(h), False)
    return math.degrees(lat), math.degrees(lng)


# --- boundary -------------------------------------------------------------

_VERTS_CII = ((2, 1, 0), (1, 2, 0), (0, 2, 1), (0, 1, 2), (1, 0, 2), (2, 0, 1))
_VERTS_CIII = ((5, 4, 0), (1, 5, 0), (0, 5, 4), (0, 1, 5), (4, 0, 5), (5, 0, 1))


def _substrate_verts(ijk, res, nverts):
    verts = _VERTS_CIII if res % 2 == 1 else _VERTS_CII
    c = _ijk.down_ap3r(_ijk.down_ap3(ijk))
    if res % 2 == 1:
        c = _ijk.down_ap7r(c)
        res += 1
    return res, [_ijk.normalize(*_ijk.add(c, verts[v])) for v in range(nverts)]


def _face_edge(adj_res, direction):
    max_dim = MAX_DIM_BY_CII_RES[adj_res]
    v0 = (3.0 * max_dim, 0.0)
    v1 = (-1.5 * max_dim, 3.0 * M_SQRT3_2 * max_dim)
    v2 = (-1.5 * max_dim, -3.0 * M_SQRT3_2 * max_dim)
    if direction == IJ:
        return v0, v1
    if direction == JK:
        return v1, v2
    return v2, v0


def _intersect(p0, p1, p2, p3):
    s1 = (p1[0] - p0[0], p1[1] - p0[1])
    s2 = (p3[0] - p2[0], p3[1] - p2[1])
    t = (s2[0] * (p0[1] - p2[1]) - s2[1] * (p0[0] - p2[0])) / (-s2[0] * s1[1] + s1[0] * s2[1])
    return (p0[0] + t * s1[0], p0[1] + t * s1[1])


def _to_deg(ll):
    return (math.degrees(ll[0]), math.degrees(ll[1]))


def _hex_boundary(face, ijk, res):
    adj_res, verts = _substrate_verts(ijk, res, 6)
    out = []
    last_face, last_overage = -1, NO_OVERAGE
    for vert in range(7):
        v = vert % 6
        overage, vface, vijk = _adjust_overage_class_ii(face, verts[v], adj_res, False, True)
        if res % 2 == 1 and vert > 0 and vface != last_face and last_overage != FACE_EDGE:
            last_v = (v + 5) % 6
            o0 = _ijk.to_hex2d(verts[last_v])
            o1 = _ijk.to_hex2d(verts[v])
            face2 = vface if last_face == face else last_face
            e0, e1 = _face_edge(adj_res, ADJACENT_FACE_DIR[face][face2])
            inter = _intersect(o0, o1, e0, e1)
            at_vertex = any(abs(p[0] - inter[0]) < 1.1920929e-7 and abs(p[1] - inter[1]) < 1.1920929e-7 for p in (o0, o1))
            if not at_vertex:
                out.append(_to_deg(_ijk.hex2d_to_geo(inter[0], inter[1], face, adj_res, True)))
        if vert < 6:
            x, y = _ijk.to_hex2d(vijk)
            out.append(_to_deg(_ijk.hex2d_to_geo(x, y, vface, adj_res, True)))
        last_face, last_overage = vface, overage
    return out


def _pent_boundary(face, ijk, res):
    adj_res, verts = _substrate_verts(ijk, res, 5)
    out = []
    last = None
    for vert in range(6):
        v = vert % 5
        vface, vijk = face, verts[v]
        while True:
            overage, vface, vijk = _adjust_overage_class_ii(vface, vijk, adj_res, False, True)
            if overage != NEW_FACE:
                break
        if res % 2 == 1 and vert > 0:
            lface, lijk = last
            o0 = _ijk.to_hex2d(lijk)
            direction = ADJACENT_FACE_DIR[vface][lface]
            tface, trans, rots = FACE_NEIGHBORS[vface][direction]
            tijk = vijk
            for _ in range(rots):
                tijk = _ijk.rotate60ccw(tijk)
            tijk = _ijk.normalize(*_ijk.add(tijk, _ijk.scale(trans, UNIT_SCALE_BY_CII_RES[adj_res] * 3)))
            o1 = _ijk.to_hex2d(tijk)
            e0, e1 = _face_edge(adj_res, ADJACENT_FACE_DIR[tface][vface])
            inter = _intersect(o0, o1, e0, e1)
            out.append(_to_deg(_ijk.hex2d_to_geo(inter[0], inter[1], tface, adj_res, True)))
        if vert < 5:
            x, y = _ijk.to_hex2d(vijk)
            out.append(_to_deg(_ijk.hex2d_to_geo(x, y, vface, adj_res, True)))
        last = (vface, vijk)
    return out


def cell_to_boundary(h):
    """Boundary vertices of a cell as a list of (lat, lng) degrees, counter-clockwise."""
    face, ijk = _h3_to_face_ijk(h)
    if is_pentagon(h):
        return _pent_boundary(face, ijk, get_resolution(h))
    return _hex_boundary(face, ijk, get_resolution(h))


# --- hierarchy and formatting ---------------------------------------------

def cell_to_parent(h, res):
    child_res = get_resolution(h)
    if not 0 <= res <= child_res:
        raise H3Error(f"parent resolution {res} not in [0, {child_res}]")
    p = (h & ~(0xF << _RES_OFFSET)) | (res << _RES_OFFSET)
    for r in range(res + 1, child_res + 1):
        p = _set_digit(p, r, 7)
    return p


def cell_to_string(h):
    return format(h, "x")


def string_to_cell(s):
    return int(s, 16)

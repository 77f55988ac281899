"""Hexagonal ijk+ coordinate arithmetic and face-plane (hex2d) conversions."""

import math

from ._constants import (
    EPSILON,
    FACE_AXES_AZ_CII,
    FACE_CENTER_GEO,
    FACE_CENTER_POINT,
    M_AP7_ROT_RADS,
    M_RSIN60,
    M_SQRT3_2,
    M_SQRT7,
    RES0_U_GNOMONIC,
    TWO_PI,
    UNIT_VECS,
)


def lround(x):
    """C ``lround``: half away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def normalize(i, j, k):
    if i < 0:
        j -= i
        k -= i
        i = 0
    if j < 0:
        i -= j
        k -= j
        j = 0
    if k < 0:
        i -= k
        j -= k
        k = 0
    m = min(i, j, k)
    if m > 0:
        i -= m
        j -= m
        k -= m
    return (i, j, k)


def add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def _combine(ijk, ivec, jvec, kvec):
    i, j, k = ijk
    return normalize(
        i * ivec[0] + j * jvec[0] + k * kvec[0],
        i * ivec[1] + j * jvec[1] + k * kvec[1],
        i * ivec[2] + j * jvec[2] + k * kvec[2],
    )


def up_ap7(ijk):
    """Parent coordinate in the next coarser (Class II from Class III) grid."""
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return normalize(lround((3 * i - j) / 7.0), lround((i + 2 * j) / 7.0), 0)


def up_ap7r(ijk):
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return normalize(lround((2 * i + j) / 7.0), lround((3 * j - i) / 7.0), 0)


def down_ap7(ijk):
    return _combine(ijk, (3, 0, 1), (1, 3, 0), (0, 1, 3))


def down_ap7r(ijk):
    return _combine(ijk, (3, 1, 0), (0, 3, 1), (1, 0, 3))


def down_ap3(ijk):
    return _combine(ijk, (2, 0, 1), (1, 2, 0), (0, 1, 2))


def down_ap3r(ijk):
    return _combine(ijk, (2, 1, 0), (0, 2, 1), (1, 0, 2))


def rotate60ccw(ijk):
    return _combine(ijk, (1, 1, 0), (0, 1, 1), (1, 0, 1))


def rotate60cw(ijk):
    return _combine(ijk, (1, 0, 1), (1, 1, 0), (0, 1, 1))


def neighbor(ijk, digit):
    if 0 < digit < 7:
        return normalize(*add(ijk, UNIT_VECS[digit]))
    return ijk


def unit_to_digit(ijk):
    c = normalize(*ijk)
    for d, v in enumerate(UNIT_VECS):
        if c == v:
            return d
    return 7


def to_hex2d(ijk):
    i = ijk[0] - ijk[2]
    j = ijk[1] - ijk[2]
    return (i - 0.5 * j, j * M_SQRT3_2)


def from_hex2d(x, y):
    """Containing hex of a face-plane point, as normalized ijk+."""
    a1 = abs(x)
    a2 = abs(y)
    x2 = a2 * M_RSIN60
    x1 = a1 + x2 / 2.0
    m1 = int(x1)
    m2 = int(x2)
    r1 = x1 - m1
    r2 = x2 - m2

    if r1 < 0.5:
        if r1 < 1.0 / 3.0:
            i = m1
            j = m2 if r2 < (1.0 + r1) / 2.0 else m2 + 1
        else:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 + 1 if (1.0 - r1) <= r2 < (2.0 * r1) else m1
    else:
        if r1 < 2.0 / 3.0:
            j = m2 if r2 < (1.0 - r1) else m2 + 1
            i = m1 if (2.0 * r1 - 1.0) < r2 < (1.0 - r1) else m1 + 1
        else:
            if r2 < (r1 / 2.0):
                i, j = m1 + 1, m2
            else:
                i, j = m1 + 1, m2 + 1

    # fold across the axes
    if x < 0.0:
        if j % 2 == 0:
            axisi = j // 2
            diff = i - axisi
            i = i - 2 * diff
        else:
            axisi = (j + 1) // 2
            diff = i - axisi
            i = i - (2 * diff + 1)
    if y < 0.0:
        i = i - (2 * j + 1) // 2
        j = -j
    return normalize(i, j, 0)


def pos_angle(a):
    t = a + TWO_PI if a < 0.0 else a
    return t - TWO_PI if t >= TWO_PI else t


def geo_azimuth(lat1, lng1, lat2, lng2):
    return math.atan2(
        math.cos(lat2) * math.sin(lng2 - lng1),
        math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(lng2 - lng1),
    )


def geo_az_distance(lat1, lng1, az, dist):
    """Point reached from (lat1, lng1) along azimuth ``az`` after angular ``dist``."""
    if dist < EPSILON:
        return lat1, lng1
    az = pos_angle(az)
    if az < EPSILON or abs(az - math.pi) < EPSILON:
        lat2 = lat1 + dist if az < EPSILON else lat1 - dist
        if abs(lat2 - math.pi / 2) < EPSILON:
            return math.pi / 2, 0.0
        if abs(lat2 + math.pi / 2) < EPSILON:
            return -math.pi / 2, 0.0
        return lat2, _constrain_lng(lng1)
    sinlat = math.sin(lat1) * math.cos(dist) + math.cos(lat1) * math.sin(dist) * math.cos(az)
    sinlat = max(-1.0, min(1.0, sinlat))
    lat2 = math.asin(sinlat)
    if abs(lat2 - math.pi / 2) < EPSILON:
        return math.pi / 2, 0.0
    if abs(lat2 + math.pi / 2) < EPSILON:
        return -math.pi / 2, 0.0
    invcos = 1.0 / math.cos(lat2)
    sinlng = max(-1.0, min(1.0, math.sin(az) * math.sin(dist) * invcos))
    coslng = max(-1.0, min(1.0, (math.cos(dist) - math.sin(lat1) * math.sin(lat2)) / math.cos(lat1) * invcos))
    return lat2, _constrain_lng(lng1 + math.atan2(sinlng, coslng))


def _constrain_lng(lng):
    while lng > math.pi:
        lng -= TWO_PI
    while lng < -math.pi:
        lng += TWO_PI
    return lng


def closest_face(lat, lng):
    """Closest icosahedron face and the squared chord distance to its center."""
    cl = math.cos(lat)
    v = (cl * math.cos(lng), cl * math.sin(lng), math.sin(lat))
    best_face, best_sqd = 0, 5.0
    for f, c in enumerate(FACE_CENTER_POINT):
        sqd = (c[0] - v[0]) ** 2 + (c[1] - v[1]) ** 2 + (c[2] - v[2]) ** 2
        if sqd < best_sqd:
            best_face, best_sqd = f, sqd
    return best_face, best_sqd


def geo_to_hex2d(lat, lng, res):
    """Face and face-plane position of a point, in units of the ``res`` grid."""
    face, sqd = closest_face(lat, lng)
    r = math.acos(max(-1.0, min(1.0, 1.0 - sqd / 2.0)))
    if r < EPSILON:
        return face, 0.0, 0.0
    clat, clng = FACE_CENTER_GEO[face]
    theta = pos_angle(FACE_AXES_AZ_CII[face] - pos_angle(geo_azimuth(clat, clng, lat, lng)))
    if res % 2 == 1:
        theta = pos_angle(theta - M_AP7_ROT_RADS)
    r = math.tan(r) / RES0_U_GNOMONIC
    for _ in range(res):
        r *= M_SQRT7
    return face, r * math.cos(theta), r * math.sin(theta)


def hex2d_to_geo(x, y, face, res, substrate):
    r = math.hypot(x, y)
    if r < EPSILON:
        return FACE_CENTER_GEO[face]
    theta = math.atan2(y, x)
    for _ in range(res):
        r /= M_SQRT7
    if substrate:
        r /= 3.0
        if res % 2 == 1:
            r /= M_SQRT7
    r = math.atan(r * RES0_U_GNOMONIC)
    if not substrate and res % 2 == 1:
        theta = pos_angle(theta + M_AP7_ROT_RADS)
    theta = pos_angle(FACE_AXES_AZ_CII[face] - theta)
    clat, clng = FACE_CENTER_GEO[face]
    return geo_az_distance(clat, clng, theta, r)

"""Solar elevation from the NOAA solar-position approximation (no refraction)."""

import math
from datetime import datetime, timezone

CIVIL_TWILIGHT_DEG = -6.0


def _julian_day(t: datetime) -> float:
    if t.tzinfo is None:
        t = t.replace(tzinfo=timezone.utc)
    return t.timestamp() / 86400.0 + 2440587.5


def solar_elevation(lat: float, lon: float, t) -> float:
    """Elevation of the sun in degrees at (lat, lon) and UTC time ``t``.

    ``t`` is a datetime or UTC epoch milliseconds.
    """
    if not isinstance(t, datetime):
        t = datetime.fromtimestamp(t / 1000.0, tz=timezone.utc)
    jd = _julian_day(t)
    jc = (jd - 2451545.0) / 36525.0

    mean_long = (280.46646 + jc * (36000.76983 + jc * 0.0003032)) % 360.0
    mean_anom = 357.52911 + jc * (35999.05029 - 0.0001537 * jc)
    ecc = 0.016708634 - jc * (0.000042037 + 0.0000001267 * jc)
    ma = math.radians(mean_anom)
    eq_ctr = (math.sin(ma) * (1.914602 - jc * (0.004817 + 0.000014 * jc))
              + math.sin(2 * ma) * (0.019993 - 0.000101 * jc)
              + math.sin(3 * ma) * 0.000289)
    true_long = mean_long + eq_ctr
    omega = 125.04 - 1934.136 * jc
    app_long = true_long - 0.00569 - 0.00478 * math.sin(math.radians(omega))
    mean_obliq = 23.0 + (26.0 + (21.448 - jc * (46.815 + jc * (0.00059 - jc * 0.001813))) / 60.0) / 60.0
    obliq = mean_obliq + 0.00256 * math.cos(math.radians(omega))
    decl = math.asin(math.sin(math.radians(obliq)) * math.sin(math.radians(app_long)))

    y = math.tan(math.radians(obliq / 2)) ** 2
    ml = math.radians(mean_long)
    eq_time = 4.0 * math.degrees(
        y * math.sin(2 * ml)
        - 2 * ecc * math.sin(ma)
        + 4 * ecc * y * math.sin(ma) * math.cos(2 * ml)
        - 0.5 * y * y * math.sin(4 * ml)
        - 1.25 * ecc * ecc * math.sin(2 * ma)
    )
    minutes = (jd + 0.5) % 1.0 * 1440.0
    true_solar = (minutes + eq_time + 4.0 * lon) % 1440.0
    hour_angle = true_solar / 4.0 - 180.0 if true_solar >= 0 else true_solar / 4.0 + 180.0

    phi = math.radians(lat)
    cos_zen = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(math.radians(hour_angle))
    zenith = math.degrees(math.acos(max(-1.0, min(1.0, cos_zen))))
    return 90.0 - zenith


def is_daytime(lat, lon, t, twilight=False) -> bool:
    """Day when the sun is above the horizon (or above -6 degrees with ``twilight``)."""
    limit = CIVIL_TWILIGHT_DEG if twilight else 0.0
    return solar_elevation(lat, lon, t) > limit

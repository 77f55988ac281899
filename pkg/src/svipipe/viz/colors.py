"""256-step viridis ramp, linear and quantile-classed scales."""

import numpy as np

_STOPS = ["#440154", "#482878", "#3e4989", "#31688e", "#26828e", "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725"]


def _rgb(h):
    return [int(h[i:i + 2], 16) for i in (1, 3, 5)]


def _ramp(n=256):
    stops = np.array([_rgb(h) for h in _STOPS], dtype=np.float64)
    pos = np.linspace(0, 1, len(stops))
    t = np.linspace(0, 1, n)
    return np.stack([np.interp(t, pos, stops[:, c]) for c in range(3)], axis=1).round().astype(int)


RAMP = _ramp()
NO_DATA = "#cccccc"


def hex_color(rgb):
    return "#%02x%02x%02x" % tuple(int(c) for c in rgb)


def ramp_color(t):
    """Colour for t in [0, 1]."""
    i = int(round(min(1.0, max(0.0, t)) * (len(RAMP) - 1)))
    return hex_color(RAMP[i])


class Scale:
    """Linear over [lo, hi], or ``classes`` quantile classes."""

    def __init__(self, values, classes=0):
        v = np.asarray([x for x in values if x is not None and np.isfinite(x)], dtype=np.float64)
        self.lo = float(v.min()) if v.size else 0.0
        self.hi = float(v.max()) if v.size else 0.0
        self.classes = int(classes)
        self.breaks = None
        if self.classes > 0 and v.size:
            self.breaks = [float(b) for b in np.quantile(v, np.linspace(0, 1, self.classes + 1))]

    def position(self, x):
        if self.breaks is not None:
            # class i covers [b_i, b_{i+1}); the top break is inclusive
            i = int(np.searchsorted(self.breaks[1:-1], x, side="right"))
            return (i + 0.5) / self.classes
        if self.hi == self.lo:
            return 0.5
        return (x - self.lo) / (self.hi - self.lo)

    def color(self, x):
        if x is None or not np.isfinite(x):
            return NO_DATA
        return ramp_color(self.position(x))

"""Minimal SVG document builder."""

from xml.sax.saxutils import escape, quoteattr


def _attrs(kw):
    out = []
    for k, v in kw.items():
        if v is None:
            continue
        if isinstance(v, float):
            v = f"{v:.2f}"
        out.append(f"{k.rstrip('_').replace('_', '-')}={quoteattr(str(v))}")
    return " ".join(out)


class Svg:
    def __init__(self, width, height, background="#ffffff"):
        self.width = width
        self.height = height
        self.parts = []
        if background:
            self.rect(0, 0, width, height, fill=background)

    def add(self, tag, text=None, **kw):
        a = _attrs(kw)
        if text is None:
            self.parts.append(f"<{tag} {a}/>")
        else:
            self.parts.append(f"<{tag} {a}>{escape(str(text))}</{tag}>")

    def rect(self, x, y, w, h, **kw):
        self.add("rect", x=float(x), y=float(y), width=float(w), height=float(h), **kw)

    def line(self, x1, y1, x2, y2, stroke="#000000", **kw):
        self.add("line", x1=float(x1), y1=float(y1), x2=float(x2), y2=float(y2), stroke=stroke, **kw)

    def circle(self, cx, cy, r, **kw):
        self.add("circle", cx=float(cx), cy=float(cy), r=float(r), **kw)

    def polyline(self, pts, **kw):
        self.add("polyline", points=" ".join(f"{x:.2f},{y:.2f}" for x, y in pts), fill="none", **kw)

    def polygon(self, pts, **kw):
        self.add("polygon", points=" ".join(f"{x:.2f},{y:.2f}" for x, y in pts), **kw)

    def text(self, x, y, s, size=11, anchor="start", **kw):
        self.add("text", s, x=float(x), y=float(y), font_size=size, font_family="sans-serif",
                 text_anchor=anchor, **kw)

    def comment(self, s):
        self.parts.append(f"<!-- {escape(s).replace('--', '- -')} -->")

    def render(self):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        return "\n".join(['<?xml version="1.0" encoding="UTF-8"?>', head] + self.parts + ["</svg>", ""])

"""SVG drawings of an embedding on its lattice.

Qubits are drawn as wire segments: the vertical qubit on wire ``c`` at
position ``z`` is a thin bar at ``x = c`` spanning ``y`` in
``[S + alpha*z, S + alpha*(z+1))``, and horizontal qubits are the transpose.
A vertical and a horizontal qubit are coupled exactly where their bars
cross, so crossing couplers are drawn as dots and along-wire couplers as
short joins.  Output depends only on the inputs (no timestamps, sorted
element order, fixed number formatting).
"""
from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .embedder import Embedding
from .lattice import HardwareGraph, LatticeParams, wire_of

PX = 4  # pixels per wire unit
MARGIN = 2

COLORS = {"visible": "#1f77b4", "hidden": "#2ca02c"}
STYLE = """
.qubit { fill: #d9d9d9; }
.qubit.disabled { fill: #f4cccc; }
.qubit.visible { fill: #1f77b4; }
.qubit.hidden { fill: #2ca02c; }
.coupler { stroke: #333333; fill: #333333; }
.coupler.intra { stroke-width: 0.5; }
.coupler.inter { stroke-width: 0.12; }
""".strip()


def _f(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _segment(u: int, c: int, z: int, p: LatticeParams, width: float = 0.6):
    """(x, y, w, h) of the bar for qubit ``(u, c, z)``."""
    lo = p.shift + p.alpha * z - 0.35
    length = p.alpha - 0.3
    if u == 0:
        return c - width / 2, lo, width, length
    return lo, c - width / 2, length, width


def _crossing(ua, ca, ub, cb):
    # point where a vertical and a horizontal bar meet
    return (ca, cb) if ua == 0 else (cb, ca)


def render_svg(e: Embedding, g: HardwareGraph) -> str:
    p = g.params
    if p is None:
        if not e.params:
            raise ValueError("cannot lay out a graph without lattice parameters")
        p = e.lattice_params()
    n = g.n_qubits
    owner = np.full(n, -1, dtype=np.int64)
    label = {}
    for idx, chain in enumerate(e.chains):
        layer = "visible" if idx < e.V else "hidden"
        pos = idx if idx < e.V else idx - e.V
        for q in chain:
            if 0 <= q < n:
                owner[q] = idx
                label[q] = (layer, f"{layer}[{pos}]")

    span = p.n_wires + 2 * MARGIN
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{span * PX}" height="{span * PX}" '
        f'viewBox="{-MARGIN} {-MARGIN} {span} {span}">',
        f"<style>\n{STYLE}\n</style>",
        f'<rect x="{-MARGIN}" y="{-MARGIN}" width="{span}" height="{span}" fill="white"/>',
        '<g id="qubits">',
    ]
    enabled = g.enabled_mask
    u_all, c_all, z_all = wire_of(np.arange(n), p)
    for q in range(n):
        u, c, z = int(u_all[q]), int(c_all[q]), int(z_all[q])
        x, y, w, h = _segment(u, c, z, p)
        attrs = f'id="q{q}"'
        if q in label:
            layer, name = label[q]
            attrs += f' class="qubit {layer}" data-chain={quoteattr(name)}'
        elif not enabled[q]:
            attrs += ' class="qubit disabled"'
        else:
            attrs += ' class="qubit"'
        out.append(f'<rect {attrs} x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}"/>')
    out.append("</g>")

    out.append('<g id="couplers">')
    edges = g.edges
    oa, ob = owner[edges[:, 0]], owner[edges[:, 1]]
    used = (oa >= 0) & (ob >= 0)
    for (a, b), same in zip(edges[used].tolist(), (oa == ob)[used].tolist()):
        kind = "intra" if same else "inter"
        ua, ca, za = int(u_all[a]), int(c_all[a]), int(z_all[a])
        ub, cb, zb = int(u_all[b]), int(c_all[b]), int(z_all[b])
        ident = f'id="e{a}-{b}" class="coupler {kind}"'
        if ua != ub:
            x, y = _crossing(ua, ca, ub, cb)
            r = 0.45 if same else 0.25
            out.append(f'<circle {ident} cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}"/>')
        else:
            # along-wire join between consecutive positions
            edge = p.shift + p.alpha * max(za, zb)
            x1, y1, x2, y2 = (ca, edge - 0.6, ca, edge + 0.6) if ua == 0 else (edge - 0.6, ca, edge + 0.6, ca)
            out.append(f'<line {ident} x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

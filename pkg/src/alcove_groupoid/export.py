"""Serialisation of windows: JSON, Graphviz DOT, and SVG for planar windows."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from .arrangement import Window, codim2_faces, enumerate_alcoves
from .salvetti import generators, relations

SCHEMA_VERSION = "1.0"


class ExportError(ValueError):
    pass


def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def window_counts(w: Window) -> dict:
    faces = codim2_faces(w)
    return {
        "dim": w.dim,
        "hyperplanes": len(w.hyperplanes),
        "alcoves": len(enumerate_alcoves(w)),
        "faces": len(faces),
        "complete_faces": sum(not f.truncated for f in faces),
        "generators": len(generators(w)),
        "relations": len(relations(w)),
    }


def window_json(w: Window, config: Optional[dict] = None) -> dict:
    from .wallcross import weight_labels

    labels = weight_labels(w)
    alcoves = []
    for a in enumerate_alcoves(w):
        entry = a.to_json()
        lab = labels.get(a.id)
        entry["weight"] = None if lab is None else lab.weight.to_json()
        alcoves.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "config": config or {"type": w.rd.label, "levi": list(w.levi.levi_simples), "p": w.p, "N": w.N},
        "counts": window_counts(w),
        "hyperplanes": [h.to_json() for h in w.hyperplanes],
        "alcoves": alcoves,
        "faces": [f.to_json() for f in codim2_faces(w)],
        "generators": [g.to_json() for g in generators(w)],
        "relations": [r.to_json() for r in relations(w)],
        "axioms": ["generator functors for two parabolics making the same step increasing are isomorphic"],
    }


def to_dot(w: Window) -> str:
    alcoves = enumerate_alcoves(w)
    name = {a.id: f"A{i}" for i, a in enumerate(alcoves)}
    lines = ["digraph alcoves {", "  node [shape=circle];"]
    for a in alcoves:
        lines.append(f'  {name[a.id]} [label="{name[a.id]}", tooltip="{a.id}"];')
    for g in generators(w):
        lines.append(f'  {name[g.source]} -> {name[g.target]} [label="{g.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def euclidean_frame(w: Window) -> np.ndarray:
    """Matrix E with |E x| the Killing-form length of the point x of V."""
    rd = w.rd
    A = np.array(rd.cartan, dtype=float)
    ell = np.array([float(x) for x in rd.lengths])
    B = A * ell[None, :] / 2.0
    M = np.linalg.inv(A)
    gram = M @ B @ M.T
    idx = list(w.levi.lattice_basis)
    G = gram[np.ix_(idx, idx)]
    return np.linalg.cholesky(G).T


def _clip_line(a: Sequence[float], b: float, box: tuple[float, float, float, float]):
    """Segment of {a.x + b = 0} inside the box (xmin, xmax, ymin, ymax)."""
    xmin, xmax, ymin, ymax = box
    pts = []
    if abs(a[1]) > 1e-12:
        for x in (xmin, xmax):
            y = -(b + a[0] * x) / a[1]
            if ymin - 1e-9 <= y <= ymax + 1e-9:
                pts.append((x, y))
    if abs(a[0]) > 1e-12:
        for y in (ymin, ymax):
            x = -(b + a[1] * y) / a[0]
            if xmin - 1e-9 <= x <= xmax + 1e-9:
                pts.append((x, y))
    pts = sorted(set((round(x, 9), round(y, 9)) for x, y in pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def to_svg(w: Window, gallery: Optional[Sequence[str]] = None, size: int = 640) -> str:
    if w.dim != 2:
        raise ExportError(f"SVG export needs dim V = 2, window has dim {w.dim}")
    alcoves = enumerate_alcoves(w)
    E = euclidean_frame(w)
    Einv_t = np.linalg.inv(E).T
    verts = {a.id: np.array([[float(c) for c in v] for v in w.vertices(a)]) @ E.T for a in alcoves}
    allv = np.vstack(list(verts.values()))
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    pad = 0.08 * (hi - lo).max()
    lo, hi = lo - pad, hi + pad
    box = (lo[0], hi[0], lo[1], hi[1])
    scale = (size - 40) / (hi - lo).max()
    shift = (size - 40 - scale * (hi - lo)) / 2

    def px(e) -> tuple[float, float]:
        return 20 + shift[0] + (e[0] - lo[0]) * scale, size - 20 - shift[1] - (e[1] - lo[1]) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    for h in w.hyperplanes:
        normal = Einv_t @ np.array([float(c) for c in h.linear])
        seg = _clip_line(normal, float(h.offset), box)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = px(seg[0]), px(seg[1])
        out.append(f'<line class="wall" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke="#555" stroke-width="1"><title>{h.label()}</title></line>')
    centre = {aid: v.mean(axis=0) for aid, v in verts.items()}
    for i, a in enumerate(alcoves):
        x, y = px(centre[a.id])
        out.append(f'<text class="alcove" x="{x:.2f}" y="{y:.2f}" font-size="9" text-anchor="middle">A{i}'
                   f'<title>{a.id}</title></text>')
    if gallery:
        pts = " ".join("{:.2f},{:.2f}".format(*px(centre[aid])) for aid in gallery)
        out.append(f'<polyline class="gallery" points="{pts}" fill="none" stroke="#c00" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

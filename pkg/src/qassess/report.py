"""JSON and static HTML renderings of an assessment result."""

from __future__ import annotations

import html
import json
from datetime import datetime, timezone
from typing import Optional

from .assessment import AssessmentResult, FactorNode, Grade, UtilityInterval

REPORT_VERSION = "1"
DECIMALS = 4


def _r(x: float) -> float:
    return round(x, DECIMALS) + 0.0  # + 0.0 turns -0.0 into 0.0


def _interval(u: UtilityInterval) -> dict:
    return {"lo": _r(u.lo), "hi": _r(u.hi), "raw": {"lo": u.lo, "hi": u.hi}}


def _grade(g: Grade) -> dict:
    return {"continuous": _r(g.continuous), "discrete": g.discrete, "raw": g.continuous}


def _node(n: FactorNode) -> dict:
    return {
        "id": n.factor_id,
        "name": n.name,
        "kind": n.kind.value,
        "utility": _interval(n.utility),
        "width": _r(n.utility.width),
        "lowConfidence": n.low_confidence,
        "grade": _grade(n.grade),
        "bestGrade": _grade(n.best_grade),
        "worstGrade": _grade(n.worst_grade),
        "children": [
            {"factor": c.factor_id, "weight": _r(c.weight), "polarity": c.polarity.value,
             "utility": _interval(c.utility), "raw": {"weight": c.weight}}
            for c in n.children
        ],
        "measures": [
            {"measure": m.measure_id, "weight": _r(m.weight), "status": "missing" if m.value is None else "present",
             "value": m.value, "utility": _interval(m.utility),
             "function": {"direction": m.function.direction.value, "min": m.function.min, "max": m.function.max},
             "raw": {"weight": m.weight}}
            for m in n.measures
        ],
    }


def _utc_now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


def report_document(result: AssessmentResult, timestamp: Optional[str] = None) -> dict:
    table = [
        {"factor": n.factor_id, "measure": m.measure_id, "value": m.value,
         "status": "missing" if m.value is None else "present",
         "weight": _r(m.weight), "utility": _interval(m.utility)}
        for n in result.nodes.values() for m in n.measures
    ]
    return {
        "reportVersion": REPORT_VERSION,
        "metadata": {
            "system": result.system_name,
            "version": result.system_version,
            "modules": list(result.model_modules),
            "timestamp": timestamp or _utc_now(),
        },
        "roots": list(result.roots),
        "factors": {fid: _node(n) for fid, n in result.nodes.items()},
        "measures": sorted(table, key=lambda row: (row["factor"], row["measure"])),
    }


def to_json(result: AssessmentResult, timestamp: Optional[str] = None) -> str:
    """Canonical JSON: sorted keys, 2-space indent, LF, trailing newline."""
    return json.dumps(report_document(result, timestamp), sort_keys=True, indent=2,
                      ensure_ascii=False, allow_nan=False) + "\n"


_CSS = """
body{font-family:system-ui,sans-serif;margin:2em;color:#222}
h1{font-size:1.4em}
details{margin-left:1.2em;border-left:1px solid #ccc;padding-left:.6em}
summary{cursor:pointer;padding:2px 0}
.badge{display:inline-block;min-width:4.5em;text-align:center;border-radius:4px;color:#fff;font-weight:bold;margin-right:.5em}
.g1{background:#1a7f37}.g2{background:#4c9a2a}.g3{background:#b59f00}.g4{background:#d97706}.g5{background:#c2410c}.g6{background:#b91c1c}
.bar{display:inline-block;position:relative;width:120px;height:10px;background:#eee;vertical-align:middle;margin:0 .5em}
.bar span{position:absolute;top:0;height:10px;background:#3b82f6}
.low-confidence{outline:2px dashed #d97706}
.flag{color:#b45309;font-size:.85em;margin-left:.4em}
.ref{margin-left:1.8em;color:#555}
table{border-collapse:collapse;margin-top:1em}
td,th{border:1px solid #ccc;padding:3px 8px;text-align:left}
.muted{color:#777}
"""


def _badge(g: Grade) -> str:
    return f'<span class="badge g{g.discrete}">{g.discrete} ({g.continuous:.2f})</span>'


def _bar(u: UtilityInterval) -> str:
    left = 100 * u.lo
    width = max(100 * u.width, 1.0)
    return (f'<span class="bar" title="utility [{u.lo:.4f}, {u.hi:.4f}]">'
            f'<span style="left:{left:.2f}%;width:{width:.2f}%"></span></span>')


def _html_node(result: AssessmentResult, fid: str, seen: set, weight: Optional[float], note: str) -> list[str]:
    n = result.nodes[fid]
    esc = html.escape
    label = f"{esc(n.name)} <span class=\"muted\">{esc(fid)}</span>"
    prefix = f'<span class="muted">w={weight:.4f}{note}</span> ' if weight is not None else ""
    if fid in seen:
        return [f'<div class="ref">{prefix}&rarr; <a href="#f-{esc(fid)}">{label}</a> (shown above)</div>']
    seen.add(fid)
    cls = "factor-node low-confidence" if n.low_confidence else "factor-node"
    flag = '<span class="flag">&#9888; low confidence</span>' if n.low_confidence else ""
    out = [f'<details open class="{cls}" id="f-{esc(fid)}" data-factor="{esc(fid)}">',
           f"<summary>{prefix}{_badge(n.grade)}{label}{_bar(n.utility)}"
           f'<span class="muted">[{n.utility.lo:.4f}, {n.utility.hi:.4f}]</span>{flag}</summary>']
    for m in n.measures:
        value = "missing" if m.value is None else f"{m.value:.6g}"
        out.append(f'<div class="ref">w={m.weight:.4f} measure {esc(m.measure_id)} = {value}'
                   f"{_bar(m.utility)}[{m.utility.lo:.4f}, {m.utility.hi:.4f}]</div>")
    for c in n.children:
        note_c = ", negative impact" if c.polarity.value == "negative" else ""
        out.extend(_html_node(result, c.factor_id, seen, c.weight, note_c))
    out.append("</details>")
    return out


def to_html(result: AssessmentResult, timestamp: Optional[str] = None) -> str:
    """Single self-contained page: collapsible factor tree plus measure table."""
    esc = html.escape
    title = f"Quality assessment: {result.system_name} {result.system_version}".strip()
    body = [f"<h1>{esc(title)}</h1>",
            f'<p class="muted">modules: {esc(", ".join(result.model_modules))} &middot; '
            f"generated {esc(timestamp or _utc_now())}</p>",
            "<h2>Factor tree</h2>"]
    seen: set = set()
    for root in result.roots:
        body.extend(_html_node(result, root, seen, None, ""))
    body.append("<h2>Measures</h2>")
    body.append("<table><thead><tr><th>Factor</th><th>Measure</th><th>Value</th>"
                "<th>Weight</th><th>Utility</th></tr></thead><tbody>")
    for n in result.nodes.values():
        for m in n.measures:
            value = "missing" if m.value is None else f"{m.value:.6g}"
            body.append(f"<tr><td>{esc(n.factor_id)}</td><td>{esc(m.measure_id)}</td><td>{value}</td>"
                        f"<td>{m.weight:.4f}</td><td>[{m.utility.lo:.4f}, {m.utility.hi:.4f}]</td></tr>")
    body.append("</tbody></table>")
    return ("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
            f"<title>{esc(title)}</title>\n<style>{_CSS}</style>\n</head>\n<body>\n"
            + "\n".join(body) + "\n</body>\n</html>\n")

"""
Assessing a system and rendering the report
===========================================

Measurement bundles map instrument ids to raw values. Missing values are
not an error: they widen the utility interval of every factor above them.
"""

import tempfile
from pathlib import Path

from qassess import data_path, load_demo_model
from qassess.assessment import assess, read_bundle, read_manual_csv
from qassess.report import to_html, to_json

model = load_demo_model()
complete = read_bundle(data_path("bundles", "java6-reference.json"))
tools_only = read_bundle(data_path("bundles", "java6-tools-only.json"))

for bundle in (complete, tools_only):
    result = assess(model, bundle)
    q = result.node("root.Quality")
    print(f"{bundle.system_name} {bundle.system_version}: utility [{q.utility.lo:.4f}, {q.utility.hi:.4f}]"
          f"  grade {q.grade.discrete} ({q.grade.continuous:.2f}), best {q.best_grade.continuous:.2f},"
          f" worst {q.worst_grade.continuous:.2f}")

# the manual inspection results close the gap
merged = tools_only.merged(read_manual_csv(data_path("bundles", "java6-manual.csv")))
print("tools + manual:", assess(model, merged).node("root.Quality").utility)

# drill down: children of Analysability, heaviest first
node = assess(model, complete).node("root.Analysability")
for child in node.children:
    print(f"  w={child.weight:.3f} {child.polarity.value:8s} {child.factor_id:40s} {child.utility.lo:.4f}")

out = Path(tempfile.mkdtemp())
result = assess(model, complete)
(out / "report.json").write_text(to_json(result), encoding="utf-8")
(out / "report.html").write_text(to_html(result), encoding="utf-8")
print("report written to", out)

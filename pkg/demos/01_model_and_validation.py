"""
Loading and validating a modular quality model
==============================================

The shipped demo model is split into three modules: a language-independent
``root`` module, an ``object-oriented`` module and a ``java`` module.
"""

from qassess import data_path
from qassess.model import check, trace
from qassess.modelformat import load_modules

# load every *.qm.json in the demo directory; order of files does not matter
modules = load_modules([data_path("demo")])
print([m.id for m in modules])

model, diagnostics = check(modules)
print(f"{len(model.factors)} factors, {len(model.measures)} measures, {len(model.instruments)} instruments")
print("diagnostics:", diagnostics or "none")

# which tool rules feed into an aspect? trace walks sub-aspects, impacting
# product factors, their refinements and measures down to the instruments
for pf, measure, instrument in trace(model, "root.FunctionalCorrectness"):
    ins = model.instruments[instrument]
    print(f"  {pf:45s} {measure:40s} {ins.tool_name or 'manual'} {ins.rule_id or ''}")

# a deliberately broken model: the evaluation weights no longer add up
import dataclasses

java = next(m for m in modules if m.id == "java")
ev = java.evaluations[0]
bad_child = dataclasses.replace(ev.children[0], weight=0.5)
bad_ev = dataclasses.replace(ev, children=(bad_child,) + tuple(ev.children[1:]))
broken = dataclasses.replace(java, evaluations=(bad_ev,) + tuple(java.evaluations[1:]))
_, diagnostics = check([m if m.id != "java" else broken for m in modules])
for d in diagnostics:
    print(d)

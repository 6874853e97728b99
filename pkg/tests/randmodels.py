"""Random single-module quality models and bundles for property tests."""

import random

from qassess.assessment import MeasurementBundle
from qassess.model import (
    EvalChild,
    Evaluation,
    Entity,
    Factor,
    Impact,
    Instrument,
    Measure,
    ModuleDef,
    UtilityFunction,
    resolve,
)


def _weights(rng, n):
    raw = [rng.uniform(0.05, 1.0) for _ in range(n)]
    total = sum(raw)
    w = [round(x / total, 9) for x in raw]
    w[-1] = 1.0 - sum(w[:-1])
    return w


def random_model(rng: random.Random, positive_only: bool = False):
    factors = [Factor("root.Q0", "Q0", "QualityAspect", "root.P")]
    impacts, measures, instruments, evaluations = [], [], [], []
    measures.append(Measure("root.Loc", "LOC", "base-size"))
    instruments.append(Instrument("root.LocTool", "root.Loc", "tool", "T", "LOC"))
    counter = {"q": 1, "f": 0, "m": 0}
    pfs: list[str] = []

    def new_pf(depth):
        fid = f"root.F{counter['f']}"
        counter["f"] += 1
        factors.append(Factor(fid, fid, "ProductFactor", "root.P"))
        children = []
        if depth < 2 and rng.random() < 0.3:
            for _ in range(rng.randint(1, 2)):
                sub = new_pf(depth + 1)
                idx = next(i for i, f in enumerate(factors) if f.id == sub)
                factors[idx] = Factor(sub, sub, "ProductFactor", "root.P", [fid])
                children.append((sub, "factor", None))
        else:
            for _ in range(rng.randint(1, 3)):
                mid = f"root.M{counter['m']}"
                counter["m"] += 1
                base = mid + "Count"
                measures.append(Measure(base, base, "base-count"))
                for k in range(rng.randint(1, 2)):
                    instruments.append(Instrument(f"{base}I{k}", base, "tool", "T", f"R{k}"))
                if rng.random() < 0.5:
                    measures.append(Measure(mid, mid, "derived-ratio", "root.Loc", base, [fid]))
                    scale = 1e-3
                else:
                    measures[-1] = Measure(base, base, "base-count", factors=[fid])
                    mid, scale = base, 10.0
                lo = rng.uniform(0, scale)
                hi = lo + rng.uniform(0.1, 1.0) * scale
                uf = UtilityFunction(rng.choice(["increasing", "decreasing"]), lo, hi)
                children.append((mid, "measure", uf))
        ws = _weights(rng, len(children))
        evaluations.append(Evaluation(fid, [EvalChild(r, k, w, u) for (r, k, u), w in zip(children, ws)]))
        pfs.append(fid)
        return fid

    def new_qa(fid, depth):
        children = []
        if depth < 2:
            for _ in range(rng.randint(0, 2)):
                sub = f"root.Q{counter['q']}"
                counter["q"] += 1
                factors.append(Factor(sub, sub, "QualityAspect", "root.P", [fid]))
                new_qa(sub, depth + 1)
                children.append(sub)
        n_pf = rng.randint(0 if children else 1, 2)
        for _ in range(n_pf):
            # reuse an existing product factor now and then to get shared sub-trees
            if pfs and rng.random() < 0.3:
                pf = rng.choice(pfs)
                if pf in children or any(i.source == pf and i.target == fid for i in impacts):
                    continue
            else:
                pf = new_pf(0)
            polarity = "positive" if positive_only else rng.choice(["positive", "negative"])
            impacts.append(Impact(pf, fid, polarity))
            children.append(pf)
        ws = _weights(rng, len(children))
        evaluations.append(Evaluation(fid, [EvalChild(c, "factor", w) for c, w in zip(children, ws)]))

    new_qa("root.Q0", 0)
    module = ModuleDef("root", [], [Entity("root.P", "P")], factors, impacts, measures, instruments, evaluations)
    return resolve([module])


def random_values(rng, model, present_prob=1.0):
    values = {}
    for iid, ins in model.instruments.items():
        if rng.random() >= present_prob:
            continue
        values[iid] = float(rng.randint(1000, 100000)) if ins.measure == "root.Loc" else float(rng.randint(0, 20))
    return values


def bundle(values):
    return MeasurementBundle("random", "1", dict(values))

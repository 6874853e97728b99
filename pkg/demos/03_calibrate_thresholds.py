"""
Calibrating utility thresholds from a baseline
==============================================

Thresholds come from a benchmark of comparable systems: the smallest and
largest values that survive the 1.5 * IQR outlier fences. Measures that
almost never fire (fewer than five systems with a nonzero value) get a jump
function at zero instead.
"""

import numpy as np

from qassess import data_path
from qassess.calibration import CalibrationSample, calibrate, read_baseline_csv

samples = read_baseline_csv(data_path("baseline", "java-baseline.csv"))
for s in samples:
    cal = calibrate(s)
    st = cal.stats
    print(f"{s.measure_id:40s} min={cal.min:.3e} max={cal.max:.3e}"
          f"  (q1={st.q1:.3e}, q3={st.q3:.3e}, nonzero {st.n_nonzero}/{st.n})")

# outliers are fenced off
rng = np.random.default_rng(1)
values = list(rng.uniform(1e-6, 2e-6, size=15)) + [5e-4]
print(calibrate(CalibrationSample("demo.Outlier", values))[:2])

# rare findings: jump function
print(calibrate(CalibrationSample("demo.Rare", [0.0] * 8 + [3e-6, 4e-6]))[:2])

# quartiles over the nonzero values only, or over all values
zeros = [0.0] * 6 + [1e-6, 2e-6, 3e-6, 4e-6, 5e-6, 9e-6]
print("nonzero basis:", calibrate(CalibrationSample("demo.Z", zeros))[:2])
print("all basis:    ", calibrate(CalibrationSample("demo.Z", zeros), iqr_basis="all")[:2])

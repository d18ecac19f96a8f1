# # Pseudospectrum scan
#
# The eps-pseudospectrum is where the resolvent norm exceeds 1/eps. On a
# grid we report the rigorous enclosure of the norm and decide membership
# where the enclosure allows it. The same table comes out of the
# ``pseudospec`` command with CSV or JSON output.

import numpy as np

from dislocated_dirac.bounds import lambda_region_membership, resolvent_norm_enclosure
from dislocated_dirac.errors import BranchPointError
from dislocated_dirac.params import SpectralPoint

m, eps, alpha = 1.0, 0.02, 0.1
re_axis = np.linspace(0, 20, 41)
im_axis = np.round(np.linspace(-1.2, 1.2, 13), 12)
# '#' inside, '.' outside, '?' undecided, 'x' at a branch corner +-m +- i
symbols = {"yes": "#", "no": ".", "undecided": "?"}
for d in im_axis[::-1]:
    line = ""
    for t in re_axis:
        try:
            lo, hi, _ = resolvent_norm_enclosure(SpectralPoint(t, d, m))
        except BranchPointError:
            line += "x"
            continue
        line += symbols["yes" if lo > 1 / eps else "no" if hi <= 1 / eps else "undecided"]
    print(f"{d:+.1f} {line}")

# The curves |Re z|^2 = m (1 - |Im z|^2) / ((1 -+ alpha) eps) bound the
# pseudospectrum from inside and outside at large Re z.

for t in (5.0, 7.0, 9.0, 12.0):
    print(t, lambda_region_membership(SpectralPoint(t, 0.3, m), alpha, eps))

# For m = 0 the level set is exactly the pair of lines |Im z| = 1 + eps.

for d in (1.01, 1.019, 1.021, 1.05):
    lo, hi, prov = resolvent_norm_enclosure(SpectralPoint(3.0, d, 0.0))
    print(d, lo > 1 / eps, prov)

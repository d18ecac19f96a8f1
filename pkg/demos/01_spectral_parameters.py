# # Spectral parameters
#
# Every closed-form object in the package is built from four square roots
# that depend on the mass m and the spectral point z: the decay rates
# mu-, mu+ on the two half-lines and the slopes w-, w+ of the decaying
# spinors. Off the spectrum both decay rates have positive real part.

import numpy as np

from dislocated_dirac.errors import BranchPointError
from dislocated_dirac.params import (SpectralPoint, classify_region, compute_params,
                                     exact_resolvent_norm_outside, limit_params_at_branch)

# Above the band the massless operator has particularly simple parameters:
# k vanishes and both slopes lie on the unit circle.

q = compute_params(SpectralPoint(0.0, 2.0, 0.0))
print("m=0, z=2i:  k =", q.k, "  |w-| =", abs(q.w_minus), "  |w+| =", abs(q.w_plus))

# Inside the band (massive case) the decay rates shrink like 1 -+ Im z
# while their imaginary parts grow with Re z.

for tau in (2.0, 10.0, 50.0):
    q = compute_params(SpectralPoint(tau, 0.3, 1.0))
    print(f"tau={tau:5.1f}  mu- = {q.mu_minus:.4f}  mu+ = {q.mu_plus:.4f}  k = {q.k:.4f}")

# The four corners +-m +- i are branch points. Exactly there the
# parameters are undefined, but the finite limits are available.

try:
    compute_params(SpectralPoint(1.0, 1.0, 1.0))
except BranchPointError as exc:
    print("branch point:", exc)
lim = limit_params_at_branch("m+i", 1.0)
print("limits at m+i:", lim.k, lim.finite_combination)

# Region tags drive the choice of bounds later on.

for z in (3 + 0.5j, 10 + 2j, 0.5 + 1.2j, 1.2 - 0.8j):
    print(z, classify_region(SpectralPoint.from_complex(z, 1.0)))

# Outside the band and for |Re z| >= m the resolvent norm is exactly
# 1/(|Im z| - 1).

print("exact norm at 5+3i:", exact_resolvent_norm_outside(SpectralPoint(5.0, 3.0, 1.0)))
print("no closed form at 3i for m=2:", exact_resolvent_norm_outside(SpectralPoint(0.0, 3.0, 2.0)))
print("sanity:", np.isclose(compute_params(SpectralPoint(0.0, 0.5, 0.0)).mu_plus, 0.5))

# # Spectrum of the unperturbed operator
#
# For m > 0 the spectrum is two pairs of horizontal rays |Im z| = 1,
# |Re z| >= m, all of it continuous. For m = 0 the whole open band is
# point spectrum, with an explicit eigenfunction at every point.

import numpy as np

from dislocated_dirac.spectrum import (apply_operator, eigenfunction_m0, eigenfunction_norm_sq_m0,
                                       spectrum_of, weyl_residual, weyl_residual_exact)

for m in (1.0, 0.0):
    rep = spectrum_of(m)
    print(f"m={m}:", {z: rep.classify(z) for z in (2 + 1j, 0.5 + 1j, 0.3j, 5 + 1.5j)})

# The massless eigenfunction decays like exp(-(1 -+ Im z)|x|) on the two
# half-lines; a finite-difference residual shows it solves the equation.

z = 1.3 - 0.4j
v = eigenfunction_m0(z)
h = 1e-3
x = np.concatenate([np.arange(-6, -0.05, h), np.arange(0.05, 6, h)])
res = apply_operator(0.0, x, v(x), (v(x + h) - v(x - h)) / (2 * h)) - z * v(x)
print("relative residual:", np.linalg.norm(res) / np.linalg.norm(v(x)))
print("norm squared:", eigenfunction_norm_sq_m0(z))

# On the rays, approximate eigenvectors are plane waves cut off smoothly on
# [n, 2n + 2]. Their residual is sqrt(2/(n + 2/3)), independent of m and
# the energy, and tends to zero.

for n in (1, 10, 100, 1000):
    print(n, weyl_residual(1.0, 3.0, 1, n), weyl_residual_exact(n))

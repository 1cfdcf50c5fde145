"""Spectrum reality and the exceptional point of the gain/loss SSH ring.

The staggered imaginary potential leaves the spectrum fully real as long as
Delta stays below the dimerization gap scale |delta|; the two bands touch
and turn complex through an exceptional point at Delta = |delta|.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from nhssh import SshModel, dispersion, spectrum_reality

delta = 0.15
print(f"delta = {delta}")
for Delta in (0.10, 0.15, 0.20, 0.5):
    rep = spectrum_reality(SshModel(delta, Delta), 400)
    print(f"  Delta = {Delta:4.2f}: {rep.classification:<10s} min margin = {rep.min_margin:+.4f}")

ks = np.linspace(0.0, 2 * np.pi, 401)
fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
for Delta, color in ((0.1, "C0"), (0.15, "C1"), (0.25, "C2")):
    eps = dispersion(SshModel(delta, Delta), ks, band=+1)
    axes[0].plot(ks, eps.real, color=color, label=f"Delta = {Delta}")
    axes[0].plot(ks, -eps.real, color=color)
    axes[1].plot(ks, eps.imag, color=color, label=f"Delta = {Delta}")
    axes[1].plot(ks, -eps.imag, color=color)
axes[0].set(xlabel="k", ylabel="Re eps", title="band structure")
axes[1].set(xlabel="k", ylabel="Im eps", title="imaginary parts (broken regime)")
axes[1].legend()
fig.tight_layout()
fig.savefig("demo_spectrum_reality.png", dpi=120)
print("wrote demo_spectrum_reality.png")

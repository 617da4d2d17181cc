"""Fingerprint quantization: 8-bit PNG storage versus float fidelity.

Shows the storage saving of byte codes over single-precision floats, why the
scale parameter matters for weak fingerprints, and how to pick it per
fingerprint with a grid search.

Run:  python demos/quantization_storage.py
"""

import os
import tempfile

import numpy as np

from prnukit import corr, dequantize, quantize, save_png, search_scale

rng = np.random.default_rng(0)
field = rng.normal(0.0, 0.02, (512, 512))   # a weak fingerprint, std 0.02

print("round-trip correlation rho(K, dequantize(quantize(K, a))):")
for a in (8.0, 32.5, 64.0, 128.0):
    recon = dequantize(quantize(field, a)).data
    print(f"  a = {a:6.1f}  ->  rho = {corr(field, recon):.4f}")

best_a, best_rho = search_scale(field, range(1, 129))
print(f"\ngrid search over a = 1..128 picks a = {best_a} (rho = {best_rho:.4f})")
print("the default a = 32.5 suits fingerprints with roughly unit sample "
      "variance;\nweak fields want a larger scale, which the sidecar stores "
      "per fingerprint")

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "fp.png")
    save_png(quantize(field, best_a), path)
    png_bytes = os.path.getsize(path)
    sidecar_bytes = os.path.getsize(path + ".json")
    raw_bytes = 4 * field.size
    print(f"\nstorage for a 512x512 fingerprint:")
    print(f"  single-precision floats: {raw_bytes:9d} bytes")
    print(f"  8-bit PNG + sidecar:     {png_bytes + sidecar_bytes:9d} bytes "
          f"({1 - (png_bytes + sidecar_bytes) / raw_bytes:.0%} saved)")

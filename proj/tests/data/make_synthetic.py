"""Regenerates synthetic_uneven.png: a colour test scene under a strong
illumination falloff (bright top-right, near-dark bottom-left)."""
import numpy as np
from PIL import Image

W = H = 256
y, x = np.mgrid[0:H, 0:W].astype(np.float64)

refl = np.empty((H, W, 3))
refl[...] = 0.55 + 0.15 * np.sin(x / 5.0)[..., None] * np.cos(y / 7.0)[..., None]
refl[..., 1] *= 0.95
refl[..., 2] *= 0.9

shapes = [
    (30, 40, 90, 120, (0.85, 0.2, 0.2)),
    (140, 30, 220, 80, (0.2, 0.7, 0.3)),
    (60, 150, 120, 230, (0.2, 0.3, 0.85)),
    (160, 140, 240, 200, (0.9, 0.85, 0.3)),
]
for x0, y0, x1, y1, c in shapes:
    refl[y0:y1, x0:x1] = c
for cx, cy, r, c in [(200, 230, 18, (0.95, 0.95, 0.95)), (40, 220, 22, (0.1, 0.1, 0.1)), (128, 128, 30, (0.7, 0.4, 0.8))]:
    refl[(x - cx) ** 2 + (y - cy) ** 2 < r * r] = c
for k in range(8):
    refl[100 + 4 * k : 102 + 4 * k, 10:250] *= 0.5

d2 = (x - 0.85 * W) ** 2 + (y - 0.15 * H) ** 2
illum = 0.06 + 0.94 * np.exp(-d2 / (2 * (0.42 * W) ** 2))
rng = np.random.default_rng(7)
img = refl * illum[..., None] + rng.normal(0, 0.004, (H, W, 3))
Image.fromarray(np.clip(np.round(img * 255), 0, 255).astype(np.uint8)).save("synthetic_uneven.png")

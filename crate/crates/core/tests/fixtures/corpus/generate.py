"""Regenerates the 20-image fixture corpus (10 blood, 10 no_blood).

Grayscale, non-square, ultrasound-like: a fan-shaped field of view with
depth-dependent tissue layers and multiplicative speckle. Blood images carry
a dark anechoic pocket; no_blood images a bright echogenic stripe.

    python3 generate.py
"""

import json
from pathlib import Path

import numpy as np
from PIL import Image

HERE = Path(__file__).resolve().parent
SEED = 20240517


def fan_mask(h, w):
    y, x = np.mgrid[0:h, 0:w]
    cx, top = (w - 1) / 2.0, -0.15 * h
    ang = np.arctan2(x - cx, y - top)
    r = np.hypot(x - cx, y - top)
    return (np.abs(ang) < 0.62) & (r < 1.12 * h)


def make(rng, label):
    h = int(rng.integers(60, 91))
    w = int(rng.integers(84, 129))
    y, x = np.mgrid[0:h, 0:w].astype(np.float64)
    depth = y / h
    layers = 0.55 + 0.25 * np.sin(2 * np.pi * depth * rng.uniform(2.5, 4.5) + rng.uniform(0, np.pi))
    layers *= np.exp(-1.2 * depth)
    layers += 0.35 * np.exp(-((depth - 0.08) / 0.05) ** 2)
    cy, cx = rng.uniform(0.45, 0.7) * h, rng.uniform(0.35, 0.65) * w
    if label == "blood":
        ry, rx = rng.uniform(0.08, 0.14) * h, rng.uniform(0.15, 0.25) * w
        pocket = ((y - cy) / ry) ** 2 + ((x - cx) / rx) ** 2 < 1.0
        layers = np.where(pocket, 0.06, layers)
    else:
        stripe = np.abs(y - cy) < rng.uniform(2.0, 4.0)
        layers = np.where(stripe, layers + 0.3, layers)
    speckle = rng.rayleigh(scale=0.8, size=(h, w))
    img = np.clip(layers * speckle * 255.0, 0, 255)
    img = np.where(fan_mask(h, w), img, 0.0)
    return np.round(img).astype(np.uint8)


def main():
    rng = np.random.default_rng(SEED)
    records = []
    for i in range(20):
        label = "blood" if i < 10 else "no_blood"
        rid = f"fx{i:02d}"
        Image.fromarray(make(rng, label), mode="L").save(HERE / f"{rid}.png", optimize=False)
        records.append({"id": rid, "path": f"{rid}.png", "label": label, "source": "real", "origin_id": None})
    with open(HERE / "manifest.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()

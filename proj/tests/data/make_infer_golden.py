#!/usr/bin/env python3
"""Independent reimplementation of `graspkit make-weights` and the regression
head. Writes a feature file, the expected head outputs for seed 2024, and the
SHA-256 of the weight container the tool should produce."""
import hashlib
import os
import struct

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
SEED = 2024
M64 = (1 << 64) - 1


def mix64(z):
    z = (z + 0x9E3779B97F4A7C15) & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def mix64_np(z):
    with np.errstate(over="ignore"):
        z = z + np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def tensor(seed, t, shape, fan_in):
    n = int(np.prod(shape))
    e = np.arange(n, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = mix64_np(mix64_np(np.uint64(mix64(seed)) ^ np.uint64(t)) ^ (e * np.uint64(0xD1B54A32D192ED03)))
    u = (h >> np.uint64(40)).astype(np.float64) * 2.0**-24
    return ((2.0 * u - 1.0) * (1.0 / np.sqrt(float(fan_in)))).astype(np.float32).reshape(shape)


def layout(dim=64, heads=4, alpha=0.5, out_dim=5):
    hd = dim // heads
    low = int(np.floor(alpha * heads))
    hi, lo = (heads - low) * hd, low * hd
    return [
        ("hi.q", (hi, dim), dim), ("hi.k", (hi, dim), dim), ("hi.v", (hi, dim), dim),
        ("lo.q", (lo, dim), dim), ("lo.k", (lo, dim), dim), ("lo.v", (lo, dim), dim),
        ("attn.out", (dim, dim), dim),
        ("fc1.weight", (2048, 768), 768), ("fc1.bias", (2048,), 768),
        ("fc2.weight", (1024, 2048), 2048), ("fc2.bias", (1024,), 2048),
        ("fc3.weight", (out_dim, 1024), 1024), ("fc3.bias", (out_dim,), 1024),
    ]


def container(tensors):
    out = bytearray(b"FVTW" + struct.pack("<II", 1, len(tensors)))
    for name, arr in tensors:
        nb = name.encode()
        out += struct.pack("<H", len(nb)) + nb + struct.pack("<B", arr.ndim)
        out += b"".join(struct.pack("<I", d) for d in arr.shape)
        out += arr.astype("<f4").tobytes()
    return bytes(out)


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & M64
    return h


def leaky(x):
    return np.where(x >= 0, x, 0.1 * x)


def main():
    rng = np.random.default_rng(7)
    feature = rng.uniform(-1.0, 1.0, 768).astype(np.float32)
    text = "# 768 values, five per line\n"
    for i in range(0, 768, 5):
        text += " ".join("%.9g" % v for v in feature[i:i + 5]) + "\n"
    with open(os.path.join(HERE, "feature_768.txt"), "w") as f:
        f.write(text)

    lines = []
    for out_dim in (5, 8):
        ts = [(name, tensor(SEED, t, shape, fan)) for t, (name, shape, fan) in enumerate(layout(out_dim=out_dim))]
        w = {name: a.astype(np.float64) for name, a in ts}
        x = feature.astype(np.float64)
        h1 = leaky(w["fc1.weight"] @ x + w["fc1.bias"])
        h2 = leaky(w["fc2.weight"] @ h1 + w["fc2.bias"])
        y = w["fc3.weight"] @ h2 + w["fc3.bias"]
        blob = container(ts)
        lines.append(f"out_dim={out_dim} bytes={len(blob)} fnv1a64={fnv1a64(blob):016x} "
                     f"sha256={hashlib.sha256(blob).hexdigest()}")
        lines.append("output=" + ",".join("%.17g" % v for v in y))
    with open(os.path.join(HERE, "infer_golden.txt"), "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

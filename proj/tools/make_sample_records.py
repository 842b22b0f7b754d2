#!/usr/bin/env python3
"""Generates the bundled synthetic RR-interval records under data/.

Each record is ~5 minutes of beats with a respiratory-style oscillation,
slow drift and beat-to-beat noise. A couple of implausible intervals are
injected so the artifact filter has something to remove.
"""
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"

# name: (mean_ms, resp_amp_ms, resp_hz, drift_amp_ms, noise_ms, format)
RECORDS = {
    "chi": (900.0, 70.0, 0.10, 40.0, 15.0, "ms"),
    "yoga": (740.0, 12.0, 0.25, 25.0, 6.0, "s2"),
    "normal": (820.0, 30.0, 0.25, 15.0, 35.0, "csv"),
}


def make(mean, amp, resp_hz, drift, noise, rng, duration_s=300.0):
    t = 0.0
    out = []
    while t < duration_s * 1000.0:
        ts = t / 1000.0
        rr = (mean + amp * math.sin(2 * math.pi * resp_hz * ts)
              + drift * math.sin(2 * math.pi * ts / 170.0)
              + rng.gauss(0.0, noise))
        out.append(round(rr, 1))
        t += rr
    return out


def main():
    OUT.mkdir(exist_ok=True)
    rng = random.Random(20201)
    for name, (mean, amp, hz, drift, noise, fmt) in RECORDS.items():
        rr = make(mean, amp, hz, drift, noise, rng)
        rr[len(rr) // 3] = 2600.0   # missed beat
        rr[2 * len(rr) // 3] = 180.0  # extra detection
        lines = [f"# synthetic {name} record, {len(rr)} beats"]
        if fmt == "ms":
            lines += [f"{v:.1f}" for v in rr]
        elif fmt == "s2":
            lines[0] += " (cumulative time s, interval s)"
            t = 0.0
            for v in rr:
                t += v / 1000.0
                lines.append(f"{t:.4f} {v / 1000.0:.4f}")
        else:
            lines[0] += " (beat index, interval ms)"
            lines += [f"{i},{v:.1f}" for i, v in enumerate(rr)]
        (OUT / f"{name}.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()

"""The two oscillating closed-form autocorrelations.

The neutral-class return ACF follows the first-order Bessel ratio
lambda1(2 tau / tau_R); the light-boundary stock ACF follows the zeroth
oscillation lambda0(2 tau / tau_r).  Both cross zero (anticorrelated
returns) and decay with different power-law envelopes, which this script
measures directly.
"""

import numpy as np

from glemarket import lambda0, lambda1


def first_zero(ratio, values):
    k = np.nonzero(np.diff(np.sign(values)))[0][0]
    return ratio[k] - values[k] * (ratio[k + 1] - ratio[k]) / (values[k + 1] - values[k])


def envelope_exponent(ratio, values, lo=10.0, hi=100.0):
    mask = (ratio >= lo) & (ratio <= hi)
    r, v = ratio[mask], np.abs(values[mask])
    peaks = np.nonzero((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))[0] + 1
    return np.polyfit(np.log(r[peaks]), np.log(v[peaks]), 1)[0]


def main():
    ratio = np.linspace(0.0, 120.0, 48001)
    neutral = lambda1(2.0 * ratio)
    light = lambda0(2.0 * ratio)

    print("first zero crossings (lag / correlation time):")
    print(f"  neutral curve: {first_zero(ratio, neutral):.5f}")
    print(f"  light curve:   {first_zero(ratio, light):.5f}")
    print("large-lag envelope exponents (fit on [10, 100]):")
    print(f"  neutral curve: {envelope_exponent(ratio, neutral):+.4f}  (expected -3/2)")
    print(f"  light curve:   {envelope_exponent(ratio, light):+.4f}  (expected -1/2)")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the figure")
        return

    fig, (top, bottom) = plt.subplots(2, 1, figsize=(8, 7), sharex=False)
    short = ratio <= 8.0
    top.plot(ratio[short], neutral[short], label="neutral: lambda1(2 tau/tau_R)")
    top.plot(ratio[short], light[short], label="light: lambda0(2 tau/tau_r)")
    top.axhline(0.0, color="gray", lw=0.5)
    top.set_xlabel("lag / correlation time")
    top.set_ylabel("return ACF")
    top.legend()

    tail = (ratio >= 5.0) & (ratio <= 120.0)
    bottom.loglog(ratio[tail], np.abs(neutral[tail]), lw=0.8)
    bottom.loglog(ratio[tail], np.abs(light[tail]), lw=0.8)
    bottom.loglog(ratio[tail], 0.8 * ratio[tail] ** -1.5, "k--", lw=0.7, label="slope -3/2")
    bottom.loglog(ratio[tail], 0.8 * ratio[tail] ** -0.5, "k:", lw=0.7, label="slope -1/2")
    bottom.set_xlabel("lag / correlation time")
    bottom.set_ylabel("|ACF| and envelopes")
    bottom.legend()

    fig.tight_layout()
    fig.savefig("oscillating_acf_curves.png", dpi=120)
    print("wrote oscillating_acf_curves.png")


if __name__ == "__main__":
    main()

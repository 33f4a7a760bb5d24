"""A tour of the memory-model catalog.

Walks every kernel variant, checks the Laplace self-consistency identity
at a spread of real points, and shows how the stock-model memory exponent
theta morphs the normalized return image between the catalog's closed
members (exponential, self-similar, oscillating).
"""

import numpy as np

from glemarket import (
    ModelSpec,
    StockClass,
    classify_theta,
    closed_form_acf,
    identity_residual,
    observable_shape,
)

CATALOG = (
    ("white noise", ModelSpec.white_noise(tau_R=1.0)),
    ("self-similar", ModelSpec.linear_self_similar(tau_R=1.0)),
    ("stock theta=0.5", ModelSpec.stock_theta(tau_r=1.0, theta=0.5)),
    ("stock theta=1.5", ModelSpec.stock_theta(tau_r=1.0, theta=1.5)),
    ("scaling theta=1.5", ModelSpec.scaling(tau_r=1.0, theta=1.5)),
    ("fractional theta=1.5", ModelSpec.fractional(tau_r=1.0, theta=1.5)),
    ("boltzmann", ModelSpec.boltzmann(tau_R=1.0)),
    ("differential", ModelSpec.differential(tau_R=1.0)),
)


def main():
    p = np.logspace(-2, 2, 25)
    print(f"{'model':<22}{'corr time':>10}{'worst identity residual':>26}")
    for name, model in CATALOG:
        residual = identity_residual(model, p / model.corr_time).max()
        print(f"{name:<22}{model.corr_time:>10.3f}{residual:>26.2e}")

    print("\nstock classes by memory exponent:")
    for theta in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0):
        label = classify_theta(theta).value
        print(f"  theta = {theta:<4g} -> {label}")
    assert classify_theta(2.0) is StockClass.ULTRA_LIGHT  # left-closed bands

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the figure")
        return

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4.5))
    u = np.linspace(0.0, 8.0, 400)
    for theta in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
        m = ModelSpec.stock_theta(tau_r=1.0, theta=theta)
        left.plot(u, observable_shape(m, u), label=f"theta={theta:g}")
    left.set_xlabel("p tau_r")
    left.set_ylabel("normalized return image")
    left.set_title("stock family")
    left.legend(fontsize=8)

    tau = np.linspace(0.0, 8.0, 400)
    for theta, style in ((0.0, "-"), (1.0, "--"), (2.0, ":")):
        m = ModelSpec.stock_theta(tau_r=1.0, theta=theta)
        right.plot(tau, closed_form_acf(m, tau), style, label=f"theta={theta:g}")
    right.axhline(0.0, color="gray", lw=0.5)
    right.set_xlabel("lag / tau_r")
    right.set_ylabel("return ACF")
    right.set_title("closed-form members")
    right.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig("model_catalog_tour.png", dpi=120)
    print("wrote model_catalog_tour.png")


if __name__ == "__main__":
    main()

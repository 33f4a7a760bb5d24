"""Geometric Brownian price paths and the volatility bridge.

In the white-noise limit the return-rate variance and correlation time
collapse into the familiar lognormal volatility through
sigma^2 = 2 <R^2> tau_R.  This script simulates an ensemble of price
paths, recovers sigma from the log-increments, and checks the bridge in
both directions.
"""

import numpy as np

from glemarket import (
    MarketParams,
    generate_wiener_increments,
    sigma_from_tau,
    simulate_gbm,
    tau_from_volatility,
)


def main():
    mu, sigma, M0 = 0.08, 0.25, 100.0
    variance_R = 1.0
    tau_R = tau_from_volatility(sigma, variance_R)
    print(f"sigma = {sigma} with <R^2> = {variance_R} implies tau_R = {tau_R}")
    print(f"inverse bridge: sigma_from_tau -> {sigma_from_tau(tau_R, variance_R)}")

    params = MarketParams(mu=mu, sigma=sigma, variance_R=variance_R, M0=M0)
    h, n_steps, n_paths = 1.0 / 252.0, 504, 1000  # two trading years
    increments = generate_wiener_increments(n_steps, h, n_paths, seed=7)
    prices = simulate_gbm(params, increments)

    log_increments = np.diff(np.log(prices.paths), axis=1)
    sigma_hat = np.sqrt(log_increments.var(ddof=0) / h)
    drift_hat = log_increments.mean() / h  # mu is the log drift here
    print(f"recovered sigma = {sigma_hat:.4f} (true {sigma})")
    print(f"recovered log drift = {drift_hat:.4f} (true {mu})")
    terminal = prices.paths[:, -1]
    horizon = h * n_steps
    print(f"terminal price: mean {terminal.mean():.2f}, "
          f"lognormal prediction {M0 * np.exp((mu + 0.5 * sigma**2) * horizon):.2f}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the figure")
        return

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4.2))
    t = h * np.arange(prices.n_steps)
    for path in prices.paths[:12]:
        left.plot(t, path, lw=0.6)
    left.set_xlabel("time (years)")
    left.set_ylabel("price")
    left.set_title("sample paths")

    right.hist(terminal, bins=60, density=True, alpha=0.7)
    right.set_xlabel("terminal price")
    right.set_ylabel("density")
    right.set_title("terminal distribution")

    fig.tight_layout()
    fig.savefig("gbm_paths_and_volatility.png", dpi=120)
    print("wrote gbm_paths_and_volatility.png")


if __name__ == "__main__":
    main()

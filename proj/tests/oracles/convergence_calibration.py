"""Energy-distance permutation test: size on i.i.d. windows, power on a unit-root walk."""
import numpy as np


def energy(x, y):
    def mean_dist(a, b):
        return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)).mean()
    return 2 * mean_dist(x, y) - mean_dist(x, x) - mean_dist(y, y)


def perm_test(x, y, perms, rng):
    z = np.vstack([x, y])
    dist = np.sqrt(((z[:, None, :] - z[None, :, :]) ** 2).sum(-1))
    n = len(x)

    def stat(idx):
        a, b = idx[:n], idx[n:]
        return 2 * dist[np.ix_(a, b)].mean() - dist[np.ix_(a, a)].mean() - dist[np.ix_(b, b)].mean()

    obs = stat(np.arange(len(z)))
    ge = sum(stat(rng.permutation(len(z))) >= obs for _ in range(perms))
    return (1 + ge) / (1 + perms)


if __name__ == "__main__":
    rej = 0
    for seed in range(100):
        g = np.random.default_rng(seed)
        p = perm_test(g.normal(size=(100, 4)), g.normal(size=(100, 4)), 200, g)
        rej += p <= 0.05
    print(f"iid windows: {rej}/100 rejections at alpha 0.05")
    rej = 0
    for seed in range(100):
        g = np.random.default_rng(seed)
        walk = np.cumsum(g.normal(0, 0.1, size=(5000, 4)), axis=0)
        x, y = walk[500:1500:10], walk[-1000::10]
        rej += perm_test(x, y, 200, g) <= 0.05
    print(f"unit-root walk d=4: {rej}/100 rejections")

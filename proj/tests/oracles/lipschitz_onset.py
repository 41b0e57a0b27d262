"""Noise-free paired iteration for the delayed contraction (N = 200, L0 = 1.1, L = 0.6).

The per-step ratio of image differences is exactly L0 for n <= N and L after,
so the log-ratio turns negative at step N + 1.
"""
import numpy as np

if __name__ == "__main__":
    N, L0, L = 200, 1.1, 0.6
    a, b = np.array([0.3]), np.array([0.3 + 1e-6])
    ratios = []
    for n in range(400):
        fa = a * (L0 if n <= N else L)
        fb = b * (L0 if n <= N else L)
        ratios.append(abs(fb - fa)[0] / abs(b - a)[0])
        a, b = fa, fa + (fb - fa) / abs(fb - fa) * 1e-6
    first = next(i for i, r in enumerate(ratios) if r < 1)
    print(f"first contracting step {first}; ratios before {ratios[first - 1]:.3f} after {ratios[first]:.3f}")

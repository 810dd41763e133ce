"""Independent oracle values frozen into the C++ tests.

Run with: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 40

print("normal_cdf(1) =", mp.ncdf(1))

# Binary call under Q by brute-force Monte Carlo (d0=0, d1=1, p1=0.8, T=5, t=1, sigma=0.25, r=0, K=0.7)
d0, d1, p1, T, t, sig, K = 0.0, 1.0, 0.8, 5.0, 1.0, 0.25, 0.7
p0 = 1 - p1
rng = np.random.default_rng(20240501)
n = 4_000_000
X = np.where(rng.random(n) < p1, d1, d0)
v = t * (T - t) / T
xi = sig * t * X + np.sqrt(v) * rng.standard_normal(n)
z = np.log(p1 / p0) + T / (T - t) * (sig * (d1 - d0) * xi - 0.5 * sig**2 * (d1**2 - d0**2) * t)
w1 = 1 / (1 + np.exp(-z))
S = d0 + (d1 - d0) * w1
pay = np.maximum(S - K, 0)
print("binary call MC (Q): %.6f +- %.6f" % (pay.mean(), pay.std() / np.sqrt(n)))

# Same value by 1-D integration over xi of the Q-law of xi (mixture density), mpmath quad
def S_of(x):
    zz = mp.log(p1 / p0) + T / (T - t) * (sig * (d1 - d0) * x - 0.5 * sig**2 * (d1**2 - d0**2) * t)
    return d0 + (d1 - d0) / (1 + mp.e**(-zz))
def dens(x):
    return p0 * mp.npdf(x, sig * t * d0, mp.sqrt(v)) + p1 * mp.npdf(x, sig * t * d1, mp.sqrt(v))
# Integrate from the exercise boundary so the kink does not spoil the rule.
xs = mp.findroot(lambda x: S_of(x) - K, 0.3)
val = mp.quad(lambda x: (S_of(x) - K) * dens(x), [xs, xs + 1, xs + 3, mp.inf])
print("binary call by quadrature:", val)

# Two-point exact root for epsilon check
delta, T2, t2, m = 0.01, 5.0, 2.5, 0.5
print("eps first order:", -2 * delta * (T2 - t2) / (sig * T2 * (1 - m)))

print("entropy(0.2,0.8) =", -0.2 * mp.log(0.2) - 0.8 * mp.log(0.8))

"""The moment generating function and its multiplicatively periodic limit.

Rescaled values (b^k t)^s e^(-lam b^k t) E(b^k t) settle on a function F
with F(bt) = F(t).  Its mean over one period in log scale is
Gamma(s) zeta(s) / log b for the full digit set.
"""
from rzeta import DigitSet
from rzeta.mgf import evaluate_F, fourier_coefficient_quadrature, rescaled_mgf
from rzeta.numerics import PrecisionContext

ctx = PrecisionContext(30, 10)
mp = ctx.mp
ds = DigitSet.full(2)
t = mp.mpf("0.8")
F = evaluate_F(ds, 3, t, ctx).value
for k in range(1, 7):
    print(f"k = {k}: |rescaled - F| = {mp.nstr(abs(rescaled_mgf(ds, 3, t, k, ctx) - F), 3)}")

for u in ("0.1", "0.4", "0.7"):
    x = mp.power(2, mp.mpf(u))
    print(f"F(2^{u}) = {mp.nstr(evaluate_F(ds, 3, x, ctx).value, 15)}"
          f"   F(2^{u} * 2) = {mp.nstr(evaluate_F(ds, 3, 2 * x, ctx).value, 15)}")

q, diff, panels = fourier_coefficient_quadrature(ds, 3, 0, ctx, tol=1e-12)
print(f"mean over a period: {mp.nstr(mp.re(q), 20)} ({panels} panels)")
print(f"Gamma(3) zeta(3)/log 2: {mp.nstr(2 * mp.zeta(3) / mp.log(2), 20)}")

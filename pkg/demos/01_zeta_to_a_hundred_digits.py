"""zeta(2) to a hundred digits from base-2 moments, checked against pi^2/6.

The series needs only about 160 terms: each term gains roughly
log10(4) digits at level 3, and the a-priori plan says how many.
"""
from rzeta import DigitSet, evaluate_series, plan_terms
from rzeta.numerics import BOUND

ds = DigitSet.full(2)
plan = plan_terms(ds, 2, 3, BOUND.mpf(10) ** -100 / 2)
print(f"planned terms for 10^-100 at level 3: {plan.M}")

r = evaluate_series(ds, 2, 3, digits=100)
mp = r.ctx.mp
print(f"value      {mp.nstr(r.value, 101)}")
print(f"pi^2/6     {mp.nstr(mp.pi ** 2 / 6, 101)}")
print(f"difference {mp.nstr(abs(r.value - mp.pi ** 2 / 6), 3)}")
print(f"bound      {BOUND.nstr(r.error_bound, 3)}   ({r.terms_used} terms, {r.elapsed:.2f} s)")
lo, hi = r.bracket
print(f"two consecutive partial sums enclose the limit: width {mp.nstr(hi - lo, 3)}")

"""The harmonic series over integers with no digit 9.

Direct summation is hopeless (the sum converges like a geometric series of
ratio 0.9 per extra digit).  The moment series gets fifty digits in well
under a second, and a brute-force enumeration of all seven-digit
candidates plus a geometric tail gives an independent, if wide, enclosure.
"""
from rzeta import DigitSet, evaluate_series, restricted_sum_bracket

ds = DigitSet(10, tuple(range(9)))
for level in (2, 3):
    r = evaluate_series(ds, 1, level, digits=50)
    print(f"level {level}: {r.ctx.mp.nstr(r.value, 52)}  ({r.terms_used} terms, {r.elapsed:.2f} s)")

for depth in (4, 5, 6, 7):
    br = restricted_sum_bracket(ds, 1, depth)
    print(f"enumeration below 10^{depth}: [{br.lower:.6f}, {br.upper:.6f}]")

# the same machinery handles complex s and sparse digit sets
sparse = DigitSet(10, (1, 3, 7))
r = evaluate_series(sparse, "0.7+12i", digits=30)
mp = r.ctx.mp
print(f"digits {{1,3,7}}, s = 0.7+12i: {mp.nstr(mp.re(r.value), 30)} {mp.nstr(mp.im(r.value), 30)}i")

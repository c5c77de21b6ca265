"""How the work grows with the imaginary part of s and with the term count.

The Pochhammer ratio |(s+1)_m|/(sigma+1)_m inflates the moment bounds for
large |t|, so more terms are needed; the moment recurrence itself costs
quadratically many operations in the number of terms.
"""
from rzeta.checks import bench_m_grid, bench_t_grid

print("sigma = 2, 30 digits")
for row in bench_t_grid(2, [0, 10, 20, 50, 100], 30):
    print(f"  t = {row['t']:>4}: {row['terms_needed']:>4} terms, {row['elapsed_ms']:8.1f} ms")

print("moment table construction")
rows = bench_m_grid([100, 200, 400, 800])
for prev, row in zip([None] + rows, rows):
    growth = "" if prev is None else f"  x{row['elapsed_ms'] / prev['elapsed_ms']:.1f}"
    print(f"  M = {row['M']:>4}: {row['elapsed_ms']:8.1f} ms{growth}")

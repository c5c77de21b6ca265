"""Why the Bernoulli closed form for the moments is not used for computing.

The closed form is exact, but its summands grow far beyond the result.  In
binary64 it loses everything by m = 30, while the linear recurrence stays
at full double precision.
"""
from rzeta.moments import closed_form_cancellation
from rzeta.numerics import PrecisionContext
from rzeta.oracle import double_precision_closed_form_demo

ctx = PrecisionContext(60)
print(f"{'m':>4} {'largest summand/result':>24} {'closed form err':>16} {'recurrence err':>16}")
for m in (2, 10, 20, 30, 40):
    ratio = closed_form_cancellation(2, 3, m, ctx)
    cf, rec = double_precision_closed_form_demo(2, 3, m)
    print(f"{m:>4} {ratio:>24.3e} {cf:>16.3e} {rec:>16.3e}")

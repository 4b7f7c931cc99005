"""Growth of N(B) on a doubling schedule, with the log-log fit."""
from threepowers import scaling_experiment
from threepowers.analysis import rows_to_csv

for e in [(1, 2), (1, 3)]:
    tab = scaling_experiment(e, [25, 50, 100, 200])
    print(e, "slope", round(tab.fitted_exponent, 4), "window", tab.fit_window)
    for r in tab.rows:
        print("  ", r.B, r.nontrivial, round(r.ratio_cubic, 4), round(r.ratio_cubic_log, 4))

print(rows_to_csv(tab.without_timings().rows))

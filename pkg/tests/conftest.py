"""Prints a one-line verdict per acceptance criterion after the run.

The acceptance tests are named test_c<N>_*; the summary collapses each to a
PASS/FAIL line so a full session reads as a checklist.
"""

CRITERION_LABELS = {
    1: "key-rate pipeline matches a 60-digit reference on 100 random draws",
    2: "star-network queueing delay within 15% of the M/D/1 prediction",
    3: "no-storage rate falls with routers and congestion; guard sweep peaks "
       "at an interior value",
    4: "storage beats no-storage only below a delay-line attenuation "
       "crossover inside [0.003, 0.05] dB/km",
    5: "short frames: no-storage keys only across one router; storage "
       "recovers the one-router pair at 0.16 dB/km",
    6: "post-filter storage limits peak at 200/300/400 us retaining "
       "82/70/58% (long frames) and near 150 us (short frames)",
    7: "uncongested transmittance equals the 10^-0.6 / 10^-1.4 / 10^-2.2 "
       "ladder",
    8: "identical config and seed reproduce byte-identical result files",
    9: "store-vs-discard comparator flips exactly once, at the analytic "
       "attenuation threshold",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_c" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            try:
                num = int(name.split("_")[1].lstrip("c"))
            except (IndexError, ValueError):
                continue
            verdicts[num] = outcome == "passed" and verdicts.get(num, True)
    if not verdicts:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(verdicts):
        word = "PASS" if verdicts[num] else "FAIL"
        terminalreporter.write_line(
            f"[{word}] criterion {num}: {CRITERION_LABELS.get(num, '')}"
        )

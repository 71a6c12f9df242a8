"""Shared test plumbing.

The acceptance tests in test_acceptance.py each cover one criterion;
the terminal-summary hook below prints one PASS/FAIL line per
criterion so a run's verdict is readable at a glance.
"""

ACCEPTANCE_LABELS = {
    "test_hand_em_oracle": "hand-EM oracle: t(haus|house)=0.75, t(das|house)=0.25, t(das|the)=0.5 within 1e-9, < 1 s",
    "test_em_monotonicity": "EM monotonicity: log-likelihood non-decreasing over 10 iterations on 3 corpora; rows sum to 1 +/- 1e-9 every iteration",
    "test_dual_score_closed_forms": "dual-score closed forms: (0,0)->1, (1,1,w=0.5)->0.367879, (2,0,w=0.5)->0.049787 within 1e-6",
    "test_mining_recovery_benchmark": "mining recovery benchmark: F1 >= 0.90 on planted pairs, < 60 s",
    "test_dedup": "dedup: exact recall 100%; MinHash estimate within 0.15 of brute-force Jaccard on 100 pairs",
    "test_sentence_splitting": "sentence splitting: Ethiopic + English fixture suites pass; concatenation preserved on 1000 random strings",
    "test_evaluation_protocol": "evaluation protocol: blindness, 1000-record unblind round-trip, aggregation to 1e-9, cell format, byte-identical export, Likert rejection",
    "test_back_translation": "back-translation: cap-ratio bound exact; bijective round trip yields H = 0",
}


def pytest_terminal_summary(terminalreporter):
    # a parametrized criterion passes only if every instance passed
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            name = report.location[2].split("[")[0]
            if name not in ACCEPTANCE_LABELS:
                continue
            ok = outcome == "passed" and verdicts.get(name, True)
            verdicts[name] = ok
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in ACCEPTANCE_LABELS.items():
        if name not in verdicts:
            continue
        verdict = "PASS" if verdicts[name] else "FAIL"
        terminalreporter.write_line(f"[ACCEPTANCE] {verdict} {label}")

"""Budget and complexity across rates at n=128 for a fixed Eb/N0."""

from guessdec import AnalysisConfig, emit_report, run_analysis

cfg = AnalysisConfig(n=128, rates=(0.9375, 0.875, 0.8125, 0.75), mode="grand",
                     epsilon_target=1e-3, samples=20000, ebn0_db=4.5)
emit_report(run_analysis(cfg), "csv", "-")

"""Run the abrupt-change preset at reduced size and print mean final pseudo-regret per algorithm."""
from forwardreg import load_preset, run_experiment

config = load_preset("abrupt")
config.replicates = 5
result = run_experiment(config)
for algo in ("dlinucb", "dlinucb_f"):
    print(f"{algo:10s} mean pseudo-regret {result.final(algo).mean():.1f}")

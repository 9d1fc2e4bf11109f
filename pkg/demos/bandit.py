"""Run OFUL and OFUL^f side by side on a small stationary bandit and print pseudo-regret."""
from forwardreg import BanditEnvSpec, BanditStream, BoundParams, make_agent, pseudo_regret_step

spec = BanditEnvSpec(d=5, sigma=0.1, T=1000, seed=3, K=10, arms="fixed_ball")
params = BoundParams(sigma=0.1, S=1.0, X=1.0, lam=1.0, delta=0.01, d=5)

for name in ("oful", "oful_f"):
    stream = BanditStream(spec)
    agent = make_agent(name, 5, params)
    total = 0.0
    for t in range(1, spec.T + 1):
        A, theta = stream.round(t)
        i, x = agent.select(A)
        total += pseudo_regret_step(theta, A, i)
        agent.update(x, stream.reward(t, x))
    print(f"{name:7s} pseudo-regret after {spec.T} rounds: {total:.2f}")

"""Stream a noisy linear model through ridge and forward and compare their running regret."""
import numpy as np

from forwardreg import OnlineForward, OnlineRidge, RegressionEnvSpec, RegressionStream

spec = RegressionEnvSpec(d=5, sigma=0.1, T=2000, seed=11)
stream = RegressionStream(spec)
ridge, fwd = OnlineRidge(5, 1.0), OnlineForward(5, 1.0)
regret = {"ridge": 0.0, "forward": 0.0}

for t in range(1, spec.T + 1):
    x, y = stream.step(t)
    best = (y - x @ stream.theta_star) ** 2
    for name, reg in (("ridge", ridge), ("forward", fwd)):
        yhat = reg.predict(x)
        regret[name] += (y - yhat) ** 2 - best
        reg.observe(x, y)
    if t in (10, 100, 1000, 2000):
        m = ridge.design.mahalanobis_sq(x)
        print(f"t={t:5d}  ridge {regret['ridge']:8.4f}  forward {regret['forward']:8.4f}  shrink 1/(1+m)={1 / (1 + m):.4f}")

print("final parameter error", np.linalg.norm(ridge.theta - stream.theta_star))

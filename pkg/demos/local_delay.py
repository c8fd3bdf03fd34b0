"""
Mean local delay versus relay density
=====================================

Expected number of transmission attempts at a -10 dB threshold with a relay
bias of 10. Denser relays add interference, so the delay grows with density,
and a smaller path-loss exponent makes it worse. Past the first-hop phase
transition the delay is infinite.
"""

from dualhop_meta import default_config, is_divergent, mean_local_delay

print("lambda2   alpha=3   alpha=4")
for lam in range(10, 101, 10):
    row = []
    for alpha in (3.0, 4.0):
        cfg = default_config(0.1).with_tier(2, bias=10.0, density=float(lam))
        cfg = cfg.with_tier(1, path_loss_exponent=alpha).with_tier(2, path_loss_exponent=alpha)
        row.append(mean_local_delay(cfg))
    print(f"{lam:7d}   {row[0]:.4f}    {row[1]:.4f}")

# At alpha = 4 the first hop stops converging once theta_2 reaches 1.
for theta in (0.9, 0.99, 1.0, 2.0):
    d = mean_local_delay(default_config(theta))
    print(f"theta = {theta:<4}: {'infinite' if is_divergent(d) else f'{d:.4f}'}")

"""Budget-constrained profit maximization on social networks.

Library layout:

- ``graph``: edge-list loading, normalized propagation operator,
  edge-probability and cost/benefit assignment.
- ``diffusion``: Monte Carlo independent-cascade simulator (the "teacher").
- ``numerics``: dense/sparse kernels, losses, Adam.
- ``surrogate``: two-layer GCN activation-probability predictor.
- ``autoencoder``: seed-mask autoencoder whose decoder parameterizes search.
- ``trainer``: teacher-labeled data generation and joint training.
- ``inference``: latent-space ascent plus greedy rounding.
- ``baselines``: eight classical seed-selection methods.
- ``harness``: experiment orchestration, config and CSV I/O.
"""

__version__ = "0.1.0"

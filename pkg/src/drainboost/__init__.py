"""Battery-drain classification with boosted trees tuned by adaptive differential evolution."""

__version__ = "0.1.0"

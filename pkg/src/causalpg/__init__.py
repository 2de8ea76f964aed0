"""causalpg: action-to-reward causal discovery and factored-advantage PPO."""

__version__ = "0.1.0"

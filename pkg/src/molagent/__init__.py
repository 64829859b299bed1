"""molagent: a tool-augmented chemistry agent and its evaluation harness."""

__version__ = "0.1.0"

"""Bounded model checking with swarm feature-omission diversity."""

__version__ = "0.1.0"

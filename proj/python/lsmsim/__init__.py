"""Deterministic fluid simulator of LSM-tree write pipelines."""

from ._lsmsim import *  # noqa: F401,F403

"""Reductions that lift counting beyond 2-DQBF."""
from __future__ import annotations

from .fomc import FoSentence, fomc_brute, fomc_encode, parse_fo
from .pipeline import ExtendedTwoDqbf, PipelineError, count_general, extended_to_2dqbf, to_2dqbf_pair, to_extended_pair
from .uniform import to_uniform

__all__ = [
    "ExtendedTwoDqbf", "FoSentence", "PipelineError", "count_general", "extended_to_2dqbf",
    "fomc_brute", "fomc_encode", "parse_fo", "to_2dqbf_pair", "to_extended_pair", "to_uniform",
]

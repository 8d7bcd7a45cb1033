"""
Inf/sup-convolution envelopes of generators and their property reports
"""

from .envelope import (
    EnvelopeBatch,
    EnvelopeKind,
    EnvelopeQuery,
    EnvelopeResult,
    envelope,
    envelope_batch,
    search_radius_yz,
    search_radius_z,
)
from .approximants import approximating_generator, dominating_generator
from .sequence import (
    PairSet,
    PointSet,
    convergence_along_trajectory,
    envelope_sequence,
    holder_modulus_check,
    sample_pairs,
    sample_points,
)

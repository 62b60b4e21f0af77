"""Adjacency labels for subgraphs and induced subgraphs of Cartesian products."""
from ._bits import Label
from .base import BaseScheme, decode_base, encode_base, make_scheme
from .exceptions import (
    BuildError,
    CartLabelError,
    ClassMembershipError,
    FormatError,
    SizeBudgetError,
    UndecodableXorError,
    ValidationError,
)
from .graph import (
    DegeneracyOrder,
    Graph,
    ProductInstance,
    cartesian_product,
    degeneracy_order,
    gen_dense_monotone,
    gen_grid,
    gen_hamming,
    gen_hypercube,
    gen_random_induced,
    gen_random_sub,
    realize,
)
from .labeler import (
    DEFAULT_SEED,
    CartesianLabeler,
    EncodingDescriptor,
    decode,
    encode,
    encode_induced,
    encode_subgraph,
    label_stats,
)
from .mphf import Mphf, build_mphf, deserialize_mphf, eval_mphf, serialize_mphf
from .sketch import (
    DistanceOneParams,
    DistanceOneSketch,
    alphabet_copy,
    binary_copy,
    build_distance_one,
    decode_distance_one,
)
from .verify import oracle_adjacent, verify_all_pairs
from .xorlift import XorLift, build_lift, lift_label, xor_decode

__version__ = "0.1.0"

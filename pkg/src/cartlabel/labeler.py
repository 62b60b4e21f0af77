"""Labels for induced subgraphs and subgraphs of Cartesian products.

An induced label is ``[distance-one sketch][XOR of lifted factor labels]``.  Two
vertices are adjacent in the induced graph iff their sketches say they differ
in exactly one coordinate and the XOR of their aggregates, which cancels every
agreeing coordinate, decodes to an adjacent pair of factor labels.

A subgraph label appends ``[rank][mphf over later neighbors][kept-edge bitmap]``
where ranks come from a degeneracy order of the induced graph; the endpoint of
lower rank decides whether an induced edge was kept.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._bits import BitReader, BitWriter, Label, ceil_log2
from ._prf import derive_seed
from .base import BaseScheme, choose_scheme, encode_factors, make_scheme
from .exceptions import BuildError, FormatError, ValidationError
from .graph import ProductInstance, degeneracy_order, realize
from .mphf import HEADER_BITS as MPHF_HEADER_BITS
from .mphf import SEED_BITS as MPHF_SEED_BITS
from .mphf import build_mphf, eval_mphf, read_mphf, write_mphf
from .sketch import (
    DEFAULT_VERIFY_CAP,
    DistanceOneParams,
    build_distance_one,
    distance_one_values,
)
from .validation import check_instance, check_pairs, check_q_mode, check_seed
from .xorlift import build_lift, lift_label, rebuild_lift, xor_decode

VERSION = 1
DEFAULT_SEED = 0x5EED_CA27_1ABE_1001


@dataclass(frozen=True)
class EncodingDescriptor:
    """Everything shared by the labels of one encoding.

    ``lift`` holds the inverse XOR index in memory; on disk only its seed and
    the base-label set are stored, and the index is rebuilt on load.
    """

    n: int
    mode: str
    seed: int
    q: int
    sketch_seed: int
    base: BaseScheme
    lift: object = field(repr=False)
    k: int = 0
    k_g: int = 0
    version: int = VERSION
    phase1_attempts: int = 1

    @property
    def s(self) -> int:
        return self.base.bits

    @property
    def lift_seed(self) -> int:
        return self.lift.seed

    @property
    def phase1(self) -> DistanceOneParams:
        return DistanceOneParams(self.n, self.q)

    @property
    def id_bits(self) -> int:
        return ceil_log2(self.n)

    @property
    def phase1_bits(self) -> int:
        return 4 * self.q + self.id_bits

    @property
    def xor_bits(self) -> int:
        return 4 * self.s

    @property
    def induced_bits(self) -> int:
        return self.phase1_bits + self.xor_bits

    def with_lift_rebuilt(self) -> "EncodingDescriptor":
        """Copy whose inverse index is recomputed from ``(lift_seed, Z)``."""
        lift = rebuild_lift(self.lift.labels, self.lift.seed)
        return EncodingDescriptor(
            self.n, self.mode, self.seed, self.q, self.sketch_seed, self.base, lift,
            self.k, self.k_g, self.version, self.phase1_attempts,
        )


# -- encoders ---------------------------------------------------------------------

def encode_induced(
    instance: ProductInstance,
    scheme: str = "auto",
    seed: int = DEFAULT_SEED,
    q_mode: str = "paper",
    verify_cap: int = DEFAULT_VERIFY_CAP,
    max_retries: int = 32,
):
    """Encode an induced instance; returns ``(descriptor, labels)``.

    ``scheme`` names the base scheme for the factors, or ``"auto"`` for the
    smallest one whose class contains all of them.
    """
    check_instance(instance, "induced")
    seed = check_seed(seed)
    check_q_mode(q_mode)
    n = instance.n
    if n < 1:
        raise ValidationError("cannot encode an empty instance")

    if scheme == "auto":
        base = choose_scheme(n, instance.factors)
    else:
        base = make_scheme(scheme, n, instance.factors)
    factor_labels = encode_factors(base, instance.factors)
    lift = build_lift([z for labels in factor_labels for z in labels], derive_seed(seed, "phase2"), max_retries)

    phase1 = build_distance_one(
        instance.tuple_array(),
        DistanceOneParams.paper(n, max_retries),
        derive_seed(seed, "phase1"),
        q_mode,
        verify_cap,
    )

    lifted = [[lift_label(lift, z).value for z in labels] for labels in factor_labels]
    xw = lift.width
    labels = []
    for x, t in enumerate(instance.tuples):
        agg = 0
        for j, c in enumerate(t):
            agg ^= lifted[j][c]
        head = phase1.labels[x]
        labels.append(Label((head.value << xw) | agg, head.length + xw))

    k_h = degeneracy_order(realize(instance)).k
    desc = EncodingDescriptor(
        n, "induced", seed, phase1.params.q, phase1.seed, base, lift, k_h, k_h,
        phase1_attempts=phase1.attempts,
    )
    return desc, labels


def encode_subgraph(
    instance: ProductInstance,
    scheme: str = "auto",
    seed: int = DEFAULT_SEED,
    q_mode: str = "paper",
    verify_cap: int = DEFAULT_VERIFY_CAP,
    max_retries: int = 32,
):
    """Encode an explicit instance (a subgraph of the induced product graph)."""
    check_instance(instance, "subgraph")
    seed = check_seed(seed)
    h_instance = instance.as_induced()
    ind, ind_labels = encode_induced(h_instance, scheme, seed, q_mode, verify_cap, max_retries)
    g = realize(instance)
    h = realize(h_instance)
    order = degeneracy_order(h)
    rank = order.rank
    id_bits = ind.id_bits

    labels = []
    for x, later in enumerate(order.later_neighbors(h)):
        keys = [rank[y] for y in later]
        hx = build_mphf(keys, derive_seed(seed, "phase3", x) & ((1 << MPHF_SEED_BITS) - 1), m=instance.n)
        bitmap = [0] * len(later)
        for y in later:
            if g.has_edge(x, y):
                bitmap[eval_mphf(hx, rank[y])] = 1
        out = BitWriter()
        out.write_label(ind_labels[x])
        out.write(rank[x], id_bits)
        write_mphf(hx, out)
        for b in bitmap:
            out.write(b, 1)
        labels.append(out.label())

    desc = EncodingDescriptor(
        ind.n, "subgraph", seed, ind.q, ind.sketch_seed, ind.base, ind.lift,
        order.k, degeneracy_order(g).k, phase1_attempts=ind.phase1_attempts,
    )
    return desc, labels


def encode(instance: ProductInstance, mode: Optional[str] = None, **kwargs):
    """Dispatch on ``mode`` (default: from the instance's edge mode)."""
    if mode is None:
        mode = "induced" if instance.induced else "subgraph"
    if mode == "induced":
        return encode_induced(instance, **kwargs)
    if mode == "subgraph":
        return encode_subgraph(instance, **kwargs)
    raise ValidationError(f"unknown mode {mode!r}")


# -- decoder ----------------------------------------------------------------------

def _subgraph_tail(desc: EncodingDescriptor, label: Label):
    """``(rank, mphf, bitmap_reader)`` parsed from a subgraph label."""
    reader = BitReader(label, desc.induced_bits)
    rank = reader.read(desc.id_bits)
    h = read_mphf(reader)
    if reader.remaining != h.k:
        raise FormatError(f"edge bitmap has {reader.remaining} bits, mphf has {h.k} keys")
    return rank, h, reader


def decode(desc: EncodingDescriptor, label_x: Label, label_y: Label) -> bool:
    """Adjacency of two vertices from their labels and the shared descriptor."""
    ib = desc.induced_bits
    if desc.mode == "induced":
        if label_x.length != ib or label_y.length != ib:
            raise FormatError(f"induced labels must have {ib} bits, got {label_x.length} and {label_y.length}")
    elif min(label_x.length, label_y.length) < ib + desc.id_bits + MPHF_HEADER_BITS:
        raise FormatError("subgraph label too short")

    hx = label_x.value >> (label_x.length - ib)
    hy = label_y.value >> (label_y.length - ib)
    xw = desc.xor_bits
    if not distance_one_values(desc.phase1, hx >> xw, hy >> xw):
        return False
    mask = (1 << xw) - 1
    if not xor_decode(desc.lift, desc.base, (hx ^ hy) & mask):
        return False
    if desc.mode == "induced":
        return True

    rx, fx, bx = _subgraph_tail(desc, label_x)
    ry, fy, by = _subgraph_tail(desc, label_y)
    if rx == ry:
        raise FormatError("distinct vertices share a rank")
    if rx < ry:
        h, bits, other = fx, bx, ry
    else:
        h, bits, other = fy, by, rx
    if h.k == 0:
        raise FormatError("lower-ranked endpoint has no later neighbors")
    slot = eval_mphf(h, other)
    bits.pos += slot
    return bits.read(1) == 1


def decode_pairs(desc: EncodingDescriptor, labels: Sequence[Label], pairs) -> np.ndarray:
    pairs = check_pairs(pairs, len(labels))
    return np.array([decode(desc, labels[a], labels[b]) for a, b in pairs.tolist()], dtype=bool)


# -- accounting -------------------------------------------------------------------

def label_fields(desc: EncodingDescriptor, label: Label) -> dict:
    """Bit count of every field of one label."""
    fields = {"phase1": desc.phase1_bits, "xor": desc.xor_bits, "rank": 0, "mphf": 0, "edges": 0}
    if desc.mode == "subgraph":
        rank, h, reader = _subgraph_tail(desc, label)
        fields["rank"] = desc.id_bits
        fields["edges"] = h.k
        fields["mphf"] = label.length - desc.induced_bits - desc.id_bits - h.k
    return fields


def label_stats(desc: EncodingDescriptor, labels: Sequence[Label], header_bits: Optional[int] = None) -> dict:
    """Exact bit accounting; ``phase3_bits`` is the largest subgraph overhead."""
    lengths = [lab.length for lab in labels]
    per = [label_fields(desc, lab) for lab in labels]
    phase3 = [f["rank"] + f["mphf"] + f["edges"] for f in per]
    if header_bits is None:
        from .io import header_text

        header_bits = 8 * len(header_text(desc).encode())
    return {
        "n": desc.n,
        "mode": desc.mode,
        "max_bits": max(lengths, default=0),
        "mean_bits": float(np.mean(lengths)) if lengths else 0.0,
        "phase1_bits": desc.phase1_bits,
        "xor_bits": desc.xor_bits,
        "phase3_bits": max(phase3, default=0),
        "phase3_mean_bits": float(np.mean(phase3)) if phase3 else 0.0,
        "rank_bits": max((f["rank"] for f in per), default=0),
        "mphf_bits": max((f["mphf"] for f in per), default=0),
        "edge_bits": max((f["edges"] for f in per), default=0),
        "q": desc.q,
        "s": desc.s,
        "kH": desc.k,
        "kG": desc.k_g,
        "header_bits": header_bits,
        "amortized_header_bits": header_bits / desc.n,
    }


# -- estimator --------------------------------------------------------------------

class CartesianLabeler(BaseEstimator):
    """Estimator-style front end.

    ``fit`` encodes a :class:`ProductInstance` (optionally verifying every pair
    against the oracle), ``transform`` returns the labels and ``predict`` decodes
    an ``(m, 2)`` array of vertex index pairs.
    """

    def __init__(
        self,
        mode="induced",
        base="auto",
        q_mode="paper",
        seed=DEFAULT_SEED,
        verify=True,
        verify_cap=DEFAULT_VERIFY_CAP,
        max_retries=32,
    ):
        self.mode = mode
        self.base = base
        self.q_mode = q_mode
        self.seed = seed
        self.verify = verify
        self.verify_cap = verify_cap
        self.max_retries = max_retries

    def fit(self, instance, y=None):
        instance = check_instance(instance, self.mode)
        self.descriptor_, self.labels_ = encode(
            instance,
            self.mode,
            scheme=self.base,
            seed=self.seed,
            q_mode=self.q_mode,
            verify_cap=self.verify_cap,
            max_retries=self.max_retries,
        )
        self.n_vertices_ = instance.n
        self.report_ = None
        if self.verify:
            from .verify import verify_all_pairs

            self.report_ = verify_all_pairs(instance, self.descriptor_, self.labels_, cap=self.verify_cap)
            if not self.report_.passed:
                raise BuildError(f"verification found {len(self.report_.mismatches)} wrong pairs")
        return self

    def transform(self, X=None):
        check_is_fitted(self, "labels_")
        return list(self.labels_)

    def fit_transform(self, instance, y=None):
        return self.fit(instance).transform()

    def predict(self, pairs):
        check_is_fitted(self, "labels_")
        return decode_pairs(self.descriptor_, self.labels_, pairs)

    def score(self, pairs, y):
        return float(np.mean(self.predict(pairs) == np.asarray(y, dtype=bool)))

    def stats(self) -> dict:
        check_is_fitted(self, "labels_")
        return label_stats(self.descriptor_, self.labels_)

"""Sparse messages stored as cliques in a clustered binary network."""

from .core import (
    CliqueNetwork,
    OrderProfile,
    Placement,
    SparseMessage,
    Topology,
    density,
    deserialize,
    learn,
    load_network,
    new_network,
    random_message,
    random_messages,
    sample_order,
    save_network,
    serialize,
)
from .retrieval import (
    DISABLED,
    RetrievalConfig,
    RetrievalOutcome,
    Selection,
    blind_recover,
    guided_recover,
    is_success,
    propagate,
    retrieve,
    select,
)
from .classify import accept, accept_oracle
from .blurred import DistortionKind, decode_distorted, init_distorted_state, permute_pairwise

__version__ = "0.1.0"

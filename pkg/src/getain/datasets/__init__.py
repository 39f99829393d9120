"""不连通二维数据集"""

from .components import ComponentSpec, component_distance
from .dataset import (
    DisconnectedDataset,
    build_dataset,
    certify_separation,
    check_weights,
    distance_to_support,
    distances_to_support,
    mle_mixture_weights,
)
from .io import component_from_section, component_to_section, read_dataset, write_dataset

__all__ = [
    "ComponentSpec",
    "component_distance",
    "DisconnectedDataset",
    "build_dataset",
    "certify_separation",
    "check_weights",
    "distance_to_support",
    "distances_to_support",
    "mle_mixture_weights",
    "read_dataset",
    "write_dataset",
    "component_from_section",
    "component_to_section",
]

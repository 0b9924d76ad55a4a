from graphrdh.codec.codec import (
    EmbedReport,
    LayerReport,
    check_image_size,
    embed,
    extract,
    payload_quarters,
)
from graphrdh.codec.mapping import is_embeddable, map_error_embed, map_error_extract
from graphrdh.codec.passes import (
    LayerPassResult,
    boundary_guard_map,
    embed_layer,
    extract_layer,
    layer_gate_map,
    preprocess_layer_boundaries,
    restore_layer_boundaries,
)
from graphrdh.codec.sideinfo import SIDE_INFO_BITS, LocationMap, SideInfo

__all__ = [
    "EmbedReport",
    "LayerPassResult",
    "LayerReport",
    "LocationMap",
    "SIDE_INFO_BITS",
    "SideInfo",
    "boundary_guard_map",
    "check_image_size",
    "embed",
    "embed_layer",
    "extract",
    "extract_layer",
    "is_embeddable",
    "layer_gate_map",
    "map_error_embed",
    "map_error_extract",
    "payload_quarters",
    "preprocess_layer_boundaries",
    "restore_layer_boundaries",
]

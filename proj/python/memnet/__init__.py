"""Crossover-free resistive memory network simulator and evolutionary trainer."""

from ._core import (  # noqa: F401
    ArchitectureSpec,
    Bitmap,
    Codebook,
    ConfigError,
    ContractError,
    DeformationDistribution,
    DeformationParams,
    FormatError,
    GlyphSet,
    InputMapKind,
    IoError,
    Network,
    SampleMode,
    StageError,
    TestProtocol,
    TrainedModel,
    ValueRange,
    apply_salt_pepper,
    assert_no_crossover,
    bit_errors,
    bitmap_to_inputs,
    build_network,
    decode,
    deform,
    evaluate,
    export_netlist_text,
    extract_main_codes,
    hamming,
    layer_sizes,
    load_glyphs,
    load_model,
    min_pairwise_distance,
    model_to_text,
    output_tree_gene_indices,
    parse_pbm,
    random_rset,
    rotate,
    rset_len,
    sample_params,
    save_model,
    scale,
    shift,
    to_pbm,
    train_from_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

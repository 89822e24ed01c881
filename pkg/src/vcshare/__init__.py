"""Visual-cryptography secret sharing.

Split monochrome images into subpixel shares under (3,n), (k,k), and
composed (k,n) threshold schemes, hide smaller secrets recursively inside
the shares of larger ones, reconstruct by OR-stacking, and verify the
contrast and security of every construction exhaustively.
"""

from .audit import (
    ComposedSecurityReport,
    ContrastReport,
    SecurityCheck,
    SecurityReport,
    composed_security_audit,
    contrast_audit,
    corrupted_copy,
    security_audit,
    security_report,
)
from .bitmatrix import (
    BitMatrix,
    ColumnPermutation,
    complement,
    enumerate_permutations,
    hamming_weight,
    or_rows,
    permute_columns,
    random_permutation,
)
from .codec import (
    BinaryImage,
    PixelCode,
    ShareImage,
    StackedGrid,
    SubpixelLayout,
    decode,
    decode_threshold,
    default_layout,
    encode_pixel,
    split_image,
    stack,
)
from .errors import (
    CapacityError,
    DegenerateFamilyError,
    FileFormatError,
    HeaderMismatchError,
    InfeasibleConstraintError,
    PbmError,
)
from .pbm import read_pbm, write_pbm
from .recursive import (
    EmbeddingConstraint,
    EmbedResult,
    Placement,
    SecretChain,
    default_placement,
    embed_chain,
    extract_embedded,
    extract_level,
    sample_constrained_permutation,
)
from .schemes import (
    FamilyAnalysis,
    FunctionFamily,
    SchemeBasis,
    analyze_family,
    build_function_family,
    build_k_of_k,
    build_k_of_n,
    build_three_of_n,
)

__version__ = "0.1.0"

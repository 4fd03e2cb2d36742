"""Legacy AVX10.2 mnemonics and their takum-based renaming."""

from .patterns import UnsupportedPattern, expand_pattern
from .tables import (
    CATEGORIES,
    Classification,
    DiffEntry,
    GroupDef,
    IsaError,
    IsaTables,
    LegacyListing,
    Rewrite,
    TableIntegrityError,
    UnclassifiedMnemonic,
    classify,
    default_tables,
    enumerate_legacy,
    enumerate_proposed,
    rewrite,
)

__all__ = [
    "CATEGORIES", "Classification", "DiffEntry", "GroupDef", "IsaError", "IsaTables",
    "LegacyListing", "Rewrite", "TableIntegrityError", "UnclassifiedMnemonic",
    "UnsupportedPattern", "classify", "default_tables", "enumerate_legacy",
    "enumerate_proposed", "expand_pattern", "rewrite",
]

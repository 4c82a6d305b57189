"""Barcodes as diagrams of matchings: overlap matchings, the equivalence with
set-valued diagrams over the real line, induced matchings and exact
interleaving/bottleneck distances."""

from .intervals import Interval, parse_interval
from .barcode import Barcode, parse_barcode, reindexes
from .barc_category import BarcodeMatching, OverlapMatching, compose_overlap, identity, kernel, cokernel, image
from .interleave import bottleneck_distance, interleaving_distance
from .persistence import PersistenceModule, ModuleMorphism, from_interval_matrix, induced_matching

__version__ = "0.1.0"

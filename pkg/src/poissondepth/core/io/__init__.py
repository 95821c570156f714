"""Readers and writers: PFM, PNG16, sparse CSV, point-map PFM sets, JSON reports."""

from poissondepth.core.io.pfm import read_pfm, read_pfm_array, write_pfm, write_pfm_array
from poissondepth.core.io.png16 import read_gray, read_png16, write_png16
from poissondepth.core.io.points import point_map_paths, read_point_map, write_point_map
from poissondepth.core.io.report import (
    RunReport,
    emit_json,
    read_report,
    render_report,
    write_report,
)
from poissondepth.core.io.schema_loader import load_schema, validate_document
from poissondepth.core.io.sparse_csv import read_sparse_csv, write_sparse_csv

__all__ = [
    "RunReport",
    "emit_json",
    "load_schema",
    "point_map_paths",
    "read_gray",
    "read_pfm",
    "read_pfm_array",
    "read_png16",
    "read_point_map",
    "read_report",
    "read_sparse_csv",
    "render_report",
    "validate_document",
    "write_pfm",
    "write_pfm_array",
    "write_png16",
    "write_point_map",
    "write_report",
    "write_sparse_csv",
]

"""Embedded relational engine for fuzzy data with an FSQL query front end.

Columns are classified by how their values compare: type 1 holds plain
values over an ordered domain, type 2 holds fuzzy values (intervals,
approximations, trapezoids, labels) over an ordered domain, and type 3 holds
possibility distributions over an unordered scalar domain related by a
similarity matrix.  Queries filter rows with FEQ (fuzzy equality) conditions
qualified by THOLD thresholds and can report fulfilment degrees with CDEG.
"""

from .errors import (
    CatalogError,
    CompileError,
    ConversionError,
    DataFileError,
    FsqlError,
    FsqlSyntaxError,
    FuzzyDbError,
    FuzzyValueError,
    SimilarityError,
)
from .core import (
    FuzzyValue,
    SimilarityRelation,
    SimilarityReport,
    SimilarityViolation,
    Trapezoid,
    ValueKind,
    check_degree,
    feq,
    format_number,
    possibility_eq,
    similarity_eq,
    to_trapezoid,
    validate_similarity,
)
from .catalog import (
    AttributeDescriptor,
    Catalog,
    ConversionRow,
    FuzzyType,
    LabelDefinition,
    decode_row,
    encode_value,
    load_catalog,
    save_catalog,
)
from .fsql import CompiledPlan, compile_query, parse_query, render_query
from .engine import (
    ExecutionStats,
    Result,
    Table,
    execute,
    format_cell,
    format_result,
    load_table,
    parse_cell,
    render_value,
    run_query,
    save_table,
)
from .data import case_study_dir

__version__ = "0.1.0"

__all__ = [
    "FuzzyDbError",
    "FuzzyValueError",
    "SimilarityError",
    "CatalogError",
    "ConversionError",
    "FsqlError",
    "FsqlSyntaxError",
    "CompileError",
    "DataFileError",
    "Trapezoid",
    "FuzzyValue",
    "ValueKind",
    "SimilarityRelation",
    "SimilarityReport",
    "SimilarityViolation",
    "check_degree",
    "format_number",
    "possibility_eq",
    "similarity_eq",
    "to_trapezoid",
    "validate_similarity",
    "feq",
    "FuzzyType",
    "AttributeDescriptor",
    "LabelDefinition",
    "ConversionRow",
    "Catalog",
    "encode_value",
    "decode_row",
    "save_catalog",
    "load_catalog",
    "parse_query",
    "render_query",
    "compile_query",
    "CompiledPlan",
    "Table",
    "load_table",
    "save_table",
    "execute",
    "run_query",
    "parse_cell",
    "format_cell",
    "render_value",
    "format_result",
    "Result",
    "ExecutionStats",
    "case_study_dir",
]

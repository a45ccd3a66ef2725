import logging
import sys
from typing import Iterable, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, Field

from src.config.settings import SCHEMA_VERSION
from src.core.derangement_graph import Spectrum

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = {
    'ekr': ['label', 'order', 'max_stabilizer', 'alpha', 'omega', 'ekr', 'strict_ekr', 'method'],
    'refutation': ['label', 'order', 'set_size', 'max_stabilizer_size', 'verified'],
    'product': ['label', 'product_kind', 'order', 'alpha', 'predicted_alpha', 'ekr', 'strict_ekr',
                'implication_holds'],
    'alpha': ['label', 'order', 'value', 'exact'],
    'omega': ['label', 'order', 'value', 'exact'],
    'spectrum': ['label', 'vertex_count', 'distinct'],
    'repair': ['n', 'alpha', 'max_stabilizer', 'ekr', 'conditional'],
    'graph': ['label', 'vertex_count', 'edge_count', 'path'],
}


class ScalarRecord(BaseModel):
    """alpha or omega of one derangement graph."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal['alpha', 'omega']
    label: str
    description: str
    order: int
    value: Optional[int] = None
    exact: bool
    lower_bound: int
    witness: List[str] = Field(default_factory=list)


class SpectrumRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal['spectrum'] = 'spectrum'
    label: str
    description: str
    vertex_count: int
    distinct: int
    eigenvalues: List[Tuple[float, int]]
    max_deviation: float


class GraphDumpRecord(BaseModel):
    schema_version: int = SCHEMA_VERSION
    kind: Literal['graph'] = 'graph'
    label: str
    vertex_count: int
    edge_count: int
    path: str


def spectrum_record(label: str, description: str, spec: Spectrum) -> SpectrumRecord:
    return SpectrumRecord(label=label, description=description, vertex_count=spec.vertex_count,
                          distinct=len(spec.eigenvalues), eigenvalues=list(spec.eigenvalues),
                          max_deviation=spec.max_deviation)


def write_record(record: BaseModel, stream=None):
    """Write one record as a JSON line."""
    stream = stream or sys.stdout
    stream.write(record.model_dump_json() + '\n')


def summary_table(records: Iterable[BaseModel]) -> pd.DataFrame:
    """One row per record with the columns that matter for its kind."""
    rows = []
    for record in records:
        data = record.model_dump()
        columns = SUMMARY_COLUMNS.get(data.get('kind'), list(data))
        row = {'kind': data.get('kind')}
        row.update({column: data.get(column) for column in columns})
        rows.append(row)
    return pd.DataFrame(rows)


def print_summary(records: List[BaseModel], stream=None):
    """Human readable summary on standard error; stdout stays machine readable."""
    stream = stream or sys.stderr
    if not records:
        stream.write("No records.\n")
        return
    table = summary_table(records)
    stream.write(table.to_string(index=False) + '\n')

"""csv / json / human rendering of tables and reports.

csv and json are byte-stable: floats are written with 17 significant
digits (csv) or Python's shortest round-trip repr (json).
"""
from __future__ import annotations
import json
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .twiddle import TwiddleTable, table_frame
from .types import OutputFormat, Strategy

FLOAT_FORMAT = "%.17g"


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    return value


def records(items: Iterable[BaseModel]) -> List[Dict[str, Any]]:
    return [{k: _plain(v) for k, v in item.model_dump().items()} for item in items]


def _csv(df: pd.DataFrame) -> str:
    df = df.copy()
    for col in df.columns:
        if df[col].dtype == bool:
            df[col] = np.where(df[col], "true", "false")
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _json(payload: Any) -> str:
    return json.dumps(payload, default=_plain) + "\n"


def render_reports(
    items: Sequence[BaseModel],
    fmt: Union[str, OutputFormat],
    human_columns: Optional[List[str]] = None,
) -> str:
    fmt = OutputFormat(fmt)
    rows = records(items)
    if fmt is OutputFormat.JSON:
        return _json(rows[0] if len(rows) == 1 else rows)
    df = pd.DataFrame(rows)
    if fmt is OutputFormat.CSV:
        return _csv(df)
    if "strategy" in df.columns:
        df["strategy"] = df["strategy"].map(lambda v: Strategy(v).label)
    if human_columns:
        df = df[human_columns]
    return df.to_string(index=False) + "\n"


def render_table(table: TwiddleTable, fmt: Union[str, OutputFormat]) -> str:
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        return _json(records(table.entries))
    df = table_frame(table)
    if fmt is OutputFormat.CSV:
        return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return df.to_string(index=False) + "\n"

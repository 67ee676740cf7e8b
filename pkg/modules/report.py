import os
from dataclasses import asdict, dataclass
from enum import Enum
from typing import List, Sequence, Union

import pandas as pd

from utils.common import create_folder
from utils.logging_setup import logger

CSV_COLUMNS = ['function', 'n', 'construction', 'nodes', 'arcs', 'ms', 'descriptor']


class Construction(str, Enum):
    SDD_HWB = "SDD_HWB"
    SDD_FN = "SDD_FN"
    OBDD_FIXED = "OBDD_FIXED"
    OBDD_MIN = "OBDD_MIN"


@dataclass
class SizeReport:
    """One measured instance: a row of the separation table."""
    function: str
    n: int
    construction: Construction
    nodes: int
    arcs: int
    ms: float
    descriptor: str = ""

    def __post_init__(self):
        self.construction = Construction(self.construction)
        if self.nodes < 0 or self.arcs < 0:
            raise ValueError(f"negative size in {self.function} n={self.n}")

    @property
    def key(self):
        return (self.function, self.n, self.construction)


def to_frame(rows: Sequence[SizeReport]) -> pd.DataFrame:
    keys = [row.key for row in rows]
    if len(set(keys)) != len(keys):
        raise ValueError("size reports must be unique per (function, n, construction)")
    records = []
    for row in rows:
        record = asdict(row)
        record['construction'] = row.construction.value
        records.append(record)
    return pd.DataFrame(records, columns=CSV_COLUMNS)


def write_csv(data: Union[Sequence[SizeReport], pd.DataFrame], path: str) -> str:
    """UTF-8, LF line endings, no index column."""
    df = data if isinstance(data, pd.DataFrame) else to_frame(data)
    create_folder(os.path.dirname(path))
    df.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def read_csv(path: str) -> List[SizeReport]:
    df = pd.read_csv(path, keep_default_na=False)
    return [SizeReport(row['function'], int(row['n']), row['construction'], int(row['nodes']),
                       int(row['arcs']), float(row['ms']), str(row['descriptor']))
            for row in df.to_dict('records')]

import io
import json
import sys

import pandas as pd

from .internal import *

# Plot-ready table written by the CLI: a CSV with a header row, or a JSON
# object {"meta": ..., "columns": [...], "rows": [[...], ...]}.

@dataclass
class Dataset:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def append(self, *row: Any) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, expected {len(self.columns)}")
        self.rows.append(tuple(_plain(v) for v in row))

    def column(self, name: str) -> list[Any]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        frame = pd.DataFrame(self.rows, columns=self.columns)
        for name in frame.columns:
            if frame[name].dtype == bool:
                frame[name] = frame[name].map({True: "true", False: "false"})
        buf = io.StringIO()
        frame.to_csv(buf, index=False, float_format="%.15g", lineterminator="\n")
        return buf.getvalue()

    # Python floats serialise with repr, which round-trips exactly.
    def to_json(self) -> str:
        return json.dumps({"meta": self.meta, "columns": self.columns,
                           "rows": [list(row) for row in self.rows]}, indent=1) + "\n"

    def write(self, path: str | None, fmt: str) -> None:
        txt = self.to_json() if fmt == "json" else self.to_csv()
        if path is None or path == "-":
            sys.stdout.write(txt)
        else:
            with open(path, "w") as f:
                f.write(txt)

    @staticmethod
    def fromJson(txt: str) -> 'Dataset':
        obj = json.loads(txt)
        if not isinstance(obj, dict) or "rows" not in obj or "columns" not in obj:
            raise ValueError("not a dataset: expected an object with 'columns' and 'rows'")
        return Dataset(list(obj["columns"]), [tuple(row) for row in obj["rows"]], obj.get("meta", {}))

def _plain(val: Any) -> Any:
    if isinstance(val, (bool, np.bool_)):
        return bool(val)
    if isinstance(val, (int, np.integer)):
        return int(val)
    if isinstance(val, (float, np.floating)):
        return float(val)
    return val

"""训练历史: 每个评估间隔、每个成员一行 `epoch,member,loss_value,coupling_value`"""

from pathlib import Path

import pandas as pd

from ..utils.logger import get_logger

log = get_logger()

HISTORY_COLUMNS = ["epoch", "member", "loss_value", "coupling_value"]


class History:
    def __init__(self):
        self._rows: list[tuple[int, int, float, float]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def record(self, epoch: int, member: int, loss_value: float, coupling_value: float = 0.0) -> None:
        self._rows.append((int(epoch), int(member), float(loss_value), float(coupling_value)))

    def extend(self, other: "History") -> None:
        self._rows.extend(other._rows)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self._rows, columns=HISTORY_COLUMNS)
        return frame.sort_values(["epoch", "member"], kind="stable").reset_index(drop=True)

    def write(self, path: Path | str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        log.debug(f"history written: {path} ({len(self)} rows)")
        return path


def read_history(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path)

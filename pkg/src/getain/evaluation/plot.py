"""散点诊断图 (SVG)"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..datasets.dataset import DisconnectedDataset  # noqa: E402
from ..datasets.geometry import Segment  # noqa: E402
from ..utils.logger import get_logger  # noqa: E402

log = get_logger()


def _outline(piece) -> np.ndarray:
    if isinstance(piece, Segment):
        return np.array([piece.a, piece.b])
    angles = np.linspace(piece.start, piece.start + piece.span, 128)
    return np.asarray(piece.center) + piece.radius * np.column_stack([np.cos(angles), np.sin(angles)])


def write_scatter_svg(
    real: np.ndarray,
    generated: np.ndarray,
    dataset: DisconnectedDataset,
    path: Path | str,
    title: str = "",
) -> Path:
    """分量轮廓 + 真实样本 (圆点) + 生成样本 (叉)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 6))
    try:
        for comp in dataset.components:
            for piece in comp.boundary():
                line = _outline(piece)
                ax.plot(line[:, 0], line[:, 1], color="black", linewidth=1.0)
        ax.scatter(real[:, 0], real[:, 1], s=4, marker="o", color="tab:blue", alpha=0.5, label="real")
        ax.scatter(generated[:, 0], generated[:, 1], s=6, marker="x", color="tab:red", alpha=0.5, label="generated")
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(loc="upper right")
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg", bbox_inches="tight")
    finally:
        plt.close(fig)
    log.debug(f"scatter written: {path}")
    return path


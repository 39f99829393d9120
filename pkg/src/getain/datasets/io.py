"""
数据集文件

- dataset.csv: 表头 `x0,x1,label`
- dataset.meta: 键值元数据, [dataset] 节 (K, d, pi, seed, n) 与每个分量一个 [component.N] 节
"""

import configparser
from pathlib import Path

import numpy as np
import pandas as pd

from ..common.cons import ComponentKind
from ..common.exceptions import ConfigError, ContractError
from ..common.settings import CHECKPOINT_PRECISION, DATASET_CSV, DATASET_META
from ..utils.logger import get_logger
from .components import ComponentSpec
from .dataset import DisconnectedDataset, certify_separation, check_weights

log = get_logger()

FLOAT_FORMAT = f"%.{CHECKPOINT_PRECISION}g"


def _fmt(v) -> str:
    if isinstance(v, (tuple, list, np.ndarray)):
        return ", ".join(_fmt(x) for x in v)
    return FLOAT_FORMAT % float(v)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def component_to_section(comp: ComponentSpec) -> dict[str, str]:
    section = {"kind": comp.kind.value, "center": _fmt(comp.center)}
    section.update({key: _fmt(value) for key, value in comp.params().items()})
    return section


def component_from_section(section) -> ComponentSpec:
    """从 meta / 配置节还原分量; 数值均为弧度"""
    try:
        kind = ComponentKind(section["kind"])
        center = _floats(section["center"])
        if kind is ComponentKind.DISK:
            return ComponentSpec.disk(center, float(section["radius"]))
        if kind is ComponentKind.ANNULUS_ARC:
            return ComponentSpec.annulus_arc(
                center,
                float(section["inner_radius"]),
                float(section["outer_radius"]),
                float(section.get("angle_start", 0.0)),
                float(section.get("angle_span", 2 * np.pi)),
            )
        return ComponentSpec.box(center, _floats(section["half_widths"]))
    except (KeyError, ValueError) as e:
        raise ConfigError(f"invalid component section: {e}") from e


def write_dataset(ds: DisconnectedDataset, out_dir: Path | str) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / DATASET_CSV
    meta_path = out_dir / DATASET_META

    frame = pd.DataFrame({"x0": ds.points[:, 0], "x1": ds.points[:, 1], "label": ds.labels.astype(int)})
    frame.to_csv(csv_path, index=False, float_format=FLOAT_FORMAT)

    meta = configparser.ConfigParser()
    meta["dataset"] = {
        "K": str(ds.K),
        "n": str(ds.n),
        "seed": str(ds.seed),
        "separation": _fmt(ds.separation),
        "pi": _fmt(ds.pi_true),
    }
    for k, comp in enumerate(ds.components):
        meta[f"component.{k}"] = component_to_section(comp)
    with meta_path.open("w", encoding="utf-8") as f:
        meta.write(f)

    log.info(f"dataset written to {out_dir} (n = {ds.n}, d = {ds.separation:.6g})")
    return csv_path, meta_path


def read_dataset(path: Path | str) -> DisconnectedDataset:
    """path 可以是数据目录或其中的 dataset.csv; 读取后重新证明间距并校验成员关系"""
    path = Path(path)
    root = path if path.is_dir() else path.parent
    csv_path = root / DATASET_CSV
    meta_path = root / DATASET_META
    if not csv_path.exists() or not meta_path.exists():
        raise ContractError(f"{root} does not contain {DATASET_CSV} and {DATASET_META}")

    meta = configparser.ConfigParser()
    meta.read(meta_path, encoding="utf-8")
    head = meta["dataset"]
    K = int(head["K"])
    components = tuple(component_from_section(meta[f"component.{k}"]) for k in range(K))
    pi = check_weights(_floats(head["pi"]), K)

    frame = pd.read_csv(csv_path, float_precision="round_trip")
    if list(frame.columns) != ["x0", "x1", "label"]:
        raise ContractError(f"{csv_path}: expected header x0,x1,label, got {list(frame.columns)}")
    points = frame[["x0", "x1"]].to_numpy(dtype=np.float64)
    labels = frame["label"].to_numpy(dtype=np.int64)

    separation, dist = certify_separation(components)
    stored = float(head["separation"])
    if not np.isclose(separation, stored, rtol=1e-9, atol=0):
        log.warning(f"stored separation {stored} differs from recomputed {separation}")

    ds = DisconnectedDataset(components, separation, points, labels, pi, int(head["seed"]), dist)
    for k, comp in enumerate(components):
        if not np.all(comp.contains(ds.class_points(k))):
            raise ContractError(f"{csv_path}: samples of class {k} lie outside their component")
    log.debug(f"dataset loaded from {root}: n = {ds.n}, K = {K}")
    return ds

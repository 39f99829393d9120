"""
检查点文件

文本格式: 头部若干 `key=value` 行 (spec, mode, K, seed, ...), 一行 `---`,
之后按成员顺序每行一个 %.17g 浮点数, 可逐位精确往返。
"""

from pathlib import Path

import numpy as np

from ..common.cons import SharingMode
from ..common.exceptions import ContractError
from ..common.settings import CHECKPOINT_PRECISION
from ..utils.logger import get_logger
from .ensemble import EnsembleModel
from .mlp import MlpSpec, ParamVector

log = get_logger()

MAGIC = "# getain checkpoint"
SEPARATOR = "---"


def _fmt(v: float) -> str:
    return f"{float(v):.{CHECKPOINT_PRECISION}g}"


def _blocks(model: EnsembleModel) -> list[tuple[str, np.ndarray]]:
    blocks = [(f"generator.{i}", g.values) for i, g in enumerate(model.generators)]
    blocks += [(f"critic.{i}", d.values) for i, d in enumerate(model.critics)]
    for name in ("bias_g", "bias_d", "latent_w", "latent_b"):
        arr = getattr(model, name)
        if arr is not None:
            blocks.append((name, arr))
    return blocks


def save_checkpoint(model: EnsembleModel, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = _blocks(model)
    header = [
        MAGIC,
        "format=1",
        f"mode={model.mode.value}",
        f"K={model.K}",
        f"seed={model.seed}",
        f"lambda={_fmt(model.lam)}",
        f"pi={','.join(_fmt(p) for p in model.pi)}",
        f"g_spec={model.g_spec.to_text()}",
        f"d_spec={model.d_spec.to_text()}",
        f"blocks={','.join(f'{name}:{arr.size}' for name, arr in blocks)}",
    ]
    header += [f"meta.{key}={value}" for key, value in sorted(model.meta.items())]
    lines = header + [SEPARATOR]
    for _, arr in blocks:
        lines.extend(_fmt(v) for v in np.asarray(arr).ravel())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.debug(f"checkpoint written: {path} ({sum(a.size for _, a in blocks)} values)")
    return path


def load_checkpoint(path: Path | str) -> EnsembleModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        raise ContractError(f"{path} is not a checkpoint file")
    try:
        sep = lines.index(SEPARATOR)
    except ValueError:
        raise ContractError(f"{path}: missing header separator") from None

    header: dict[str, str] = {}
    for line in lines[1:sep]:
        key, _, value = line.partition("=")
        header[key] = value
    values = np.array([float(v) for v in lines[sep + 1 :] if v], dtype=np.float64)

    mode = SharingMode(header["mode"])
    K = int(header["K"])
    g_spec = MlpSpec.from_text(header["g_spec"])
    d_spec = MlpSpec.from_text(header["d_spec"])
    pi = np.array([float(p) for p in header["pi"].split(",")])

    arrays: dict[str, np.ndarray] = {}
    pos = 0
    for entry in header["blocks"].split(","):
        name, _, size = entry.partition(":")
        size = int(size)
        arrays[name] = values[pos : pos + size]
        pos += size
    if pos != values.size:
        raise ContractError(f"{path}: expected {pos} values, found {values.size}")

    generators = [ParamVector(arrays[n].copy(), g_spec) for n in sorted(arrays, key=_order) if n.startswith("generator.")]
    critics = [ParamVector(arrays[n].copy(), d_spec) for n in sorted(arrays, key=_order) if n.startswith("critic.")]
    extra = {}
    latent = g_spec.input_size
    if "bias_g" in arrays:
        extra["bias_g"] = arrays["bias_g"].reshape(g_spec.layer_sizes[1], K).copy()
    if "bias_d" in arrays:
        extra["bias_d"] = arrays["bias_d"].reshape(d_spec.layer_sizes[1], K).copy()
    if "latent_w" in arrays:
        extra["latent_w"] = arrays["latent_w"].reshape(K, latent, latent).copy()
    if "latent_b" in arrays:
        extra["latent_b"] = arrays["latent_b"].reshape(K, latent).copy()
    meta = {key[len("meta.") :]: value for key, value in header.items() if key.startswith("meta.")}

    return EnsembleModel(
        g_spec=g_spec,
        d_spec=d_spec,
        mode=mode,
        pi=pi,
        generators=generators,
        critics=critics,
        lam=float(header["lambda"]),
        seed=int(header["seed"]),
        meta=meta,
        **extra,
    )


def _order(name: str) -> tuple[str, int]:
    prefix, _, index = name.partition(".")
    return prefix, int(index) if index.isdigit() else 0

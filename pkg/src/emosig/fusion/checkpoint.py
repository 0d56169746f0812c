"""Versioned, byte-deterministic model checkpoints with a JSON sidecar.

Layout: magic, little-endian uint32 header length, JSON header (sorted
keys) describing tensor names/shapes, then raw float64 tensor bytes in
header order. No timestamps or environment data, so identical weights
always produce identical files.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import torch

from ..errors import EmosigError

MAGIC = b"EMOSIGCKPT\n"
FORMAT_VERSION = 1


def save_checkpoint(path: str | Path, model: torch.nn.Module, sidecar: dict) -> None:
    state = model.state_dict()
    names = list(state)
    header = {
        "format_version": FORMAT_VERSION,
        "dtype": "float64",
        "tensors": [{"name": n, "shape": list(state[n].shape)} for n in names],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    p = Path(path)
    with p.open("wb") as handle:
        handle.write(MAGIC)
        handle.write(struct.pack("<I", len(header_bytes)))
        handle.write(header_bytes)
        for name in names:
            values = state[name].detach().to(torch.float64).contiguous().view(-1).tolist()
            handle.write(struct.pack(f"<{len(values)}d", *values))
    sidecar_path = p.with_suffix(p.suffix + ".json")
    sidecar_path.write_text(
        json.dumps(sidecar, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )


def load_checkpoint(path: str | Path) -> dict[str, torch.Tensor]:
    p = Path(path)
    blob = p.read_bytes()
    if not blob.startswith(MAGIC):
        raise EmosigError(f"{p}: not an emosig checkpoint (bad magic)")
    offset = len(MAGIC)
    (header_len,) = struct.unpack_from("<I", blob, offset)
    offset += 4
    header = json.loads(blob[offset : offset + header_len].decode("utf-8"))
    if header.get("format_version") != FORMAT_VERSION:
        raise EmosigError(
            f"{p}: unsupported checkpoint version {header.get('format_version')}"
        )
    offset += header_len
    tensors: dict[str, torch.Tensor] = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = 1
        for dim in shape:
            count *= dim
        values = struct.unpack_from(f"<{count}d", blob, offset)
        offset += 8 * count
        tensors[entry["name"]] = torch.tensor(values, dtype=torch.float64).reshape(shape)
    return tensors


def load_into(model: torch.nn.Module, path: str | Path) -> None:
    model.load_state_dict(load_checkpoint(path))

import os
from pathlib import Path
from typing import Union


def ensure_parent(path: Union[str, os.PathLike]) -> Path:
    """create the parent directory of an output file and return it as Path"""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    return path

def sidecar_path(path: Union[str, os.PathLike], tag: str) -> Path:
    # data.csv -> data.truth.csv
    path = Path(path)
    return path.with_name(f"{path.stem}.{tag}{path.suffix or '.csv'}")

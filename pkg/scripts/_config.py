"""Tiny helper: expose a dataclass config as command line flags."""

import argparse
from dataclasses import asdict, fields


def from_argv(cls, description=""):
    p = argparse.ArgumentParser(description=description)
    for f in fields(cls):
        flag = "--" + f.name.replace("_", "-")
        if f.type in ("bool", bool):
            p.add_argument(flag, action="store_true", default=f.default)
        else:
            kind = {"int": int, "float": float, "str": str}.get(f.type, f.type)
            p.add_argument(flag, type=kind, default=f.default)
    cfg = cls(**vars(p.parse_args()))
    print("config:", asdict(cfg))
    return cfg

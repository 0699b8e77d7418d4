"""CSV and JSON writers. Output is a pure function of the result, so reruns are byte-identical."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math

OBS_HEADER = ["experiment", "cell", "seed", "run", "config_hash", "quantity", "index", "value"]
SUMMARY_HEADER = ["experiment", "cell", "config_hash", "quantity", "index",
                  "median", "quantile_0.025", "quantile_0.975", "count"]


def _num(x) -> str:
    return f"{x:.17e}"


def _idx(i) -> str:
    return "" if i is None else str(i)


def to_csv(result) -> str:
    cfg = result.config
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OBS_HEADER)
    for o in sorted(result.observations, key=lambda o: o.run):
        w.writerow([cfg.experiment, o.cell, cfg.seed, o.run, result.config_hash, o.quantity, _idx(o.index), _num(o.value)])
    buf.write("\n")
    w.writerow(SUMMARY_HEADER)
    for s in result.summary:
        st = s.stats
        w.writerow([cfg.experiment, s.cell, result.config_hash, s.quantity, _idx(s.index),
                    _num(st.median), _num(st.quantile_025), _num(st.quantile_975), st.count])
    return buf.getvalue()


def _finite(x):
    return x if isinstance(x, float) and math.isfinite(x) else (None if isinstance(x, float) else x)


def to_json(result) -> str:
    cfg = result.config
    config = dataclasses.asdict(cfg)
    config.pop("output")  # where the file goes must not change its bytes
    doc = {
        "config": config,
        "config_hash": result.config_hash,
        "runs": [
            {"cell": o.cell, "seed": cfg.seed, "run": o.run, "config_hash": result.config_hash,
             "quantity": o.quantity, "index": o.index, "value": _finite(o.value)}
            for o in sorted(result.observations, key=lambda o: o.run)
        ],
        "summary": [
            {"cell": s.cell, "quantity": s.quantity, "index": s.index, **dataclasses.asdict(s.stats)}
            for s in result.summary
        ],
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def render(result, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(result)
    if fmt == "json":
        return to_json(result)
    raise ValueError(f"unknown format {fmt!r}")


def write(result, path, fmt: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(render(result, fmt))

"""Network files and report files."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

from .network import Network, NetworkError

FORMAT_VERSION = 1


class NetworkParseError(ValueError):
    """A network file could not be read; the message names the offending field."""


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _floats(values) -> str:
    # repr gives the shortest decimal string that round-trips
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


def network_to_json(net: Network) -> str:
    parts = []
    for W, b in net.layers:
        parts.append(
            '    {"rows": %d, "cols": %d, "weights": %s, "bias": %s}'
            % (W.shape[0], W.shape[1], _floats(W.ravel()), _floats(b)))
    return '{\n  "version": %d,\n  "layers": [\n%s\n  ]\n}\n' % (FORMAT_VERSION, ",\n".join(parts))


def network_from_json(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise NetworkParseError("top level must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise NetworkParseError(f"field 'version': expected {FORMAT_VERSION}, got {doc.get('version')!r}")
    layers = doc.get("layers")
    if not isinstance(layers, list) or not layers:
        raise NetworkParseError("field 'layers': expected a nonempty list")
    out = []
    for k, layer in enumerate(layers):
        where = f"layers[{k}]"
        if not isinstance(layer, dict):
            raise NetworkParseError(f"{where}: expected an object")
        for key in ("rows", "cols", "weights", "bias"):
            if key not in layer:
                raise NetworkParseError(f"{where}: missing field '{key}'")
        rows, cols = layer["rows"], layer["cols"]
        if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
            raise NetworkParseError(f"{where}: 'rows' and 'cols' must be positive integers")
        try:
            W = np.array(layer["weights"], dtype=np.float64)
            b = np.array(layer["bias"], dtype=np.float64)
        except (TypeError, ValueError):
            raise NetworkParseError(f"{where}: weights and bias must be numeric arrays") from None
        if W.ndim != 1 or W.size != rows * cols:
            raise NetworkParseError(f"{where}.weights: expected {rows * cols} numbers, got {W.size}")
        if b.ndim != 1 or b.size != rows:
            raise NetworkParseError(f"{where}.bias: expected {rows} numbers, got {b.size}")
        out.append((W.reshape(rows, cols), b))
    try:
        return Network(out)
    except NetworkError as exc:
        raise NetworkParseError(str(exc)) from None


def save_network(net: Network, path: str) -> None:
    atomic_write(path, network_to_json(net))


def load_network(path: str) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return network_from_json(fh.read())


# --------------------------------------------------------------------------
# reports

def _num(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return str(x)
        return float(f"{x:.17g}")
    return x


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: _plain(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return _num(obj)


def _dump_number(x: float) -> str:
    return f"{x:.17g}"


def report_to_json(report: dict) -> str:
    """JSON text with every real written at 17 significant digits."""
    def enc(v, indent):
        pad = "  " * indent
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f'{pad}  {json.dumps(k)}: {enc(x, indent + 1)}' for k, x in v.items()]
            return "{\n" + ",\n".join(items) + f"\n{pad}}}"
        if isinstance(v, list):
            if all(not isinstance(x, (dict, list)) for x in v):
                return "[" + ", ".join(enc(x, indent) for x in v) + "]"
            items = [f"{pad}  {enc(x, indent + 1)}" for x in v]
            return "[\n" + ",\n".join(items) + f"\n{pad}]"
        if isinstance(v, bool) or v is None:
            return json.dumps(v)
        if isinstance(v, int):
            return str(v)
        if isinstance(v, float):
            s = _dump_number(v)
            return s if any(c in s for c in ".en") else s + ".0"
        return json.dumps(v)
    return enc(_plain(report), 0) + "\n"


def bounds_to_csv(bounds) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "measured", "claimed", "relation", "pass", "anchor"])
    for b in bounds:
        w.writerow([b.name, _dump_number(float(b.measured)), _dump_number(float(b.claimed)),
                    b.relation, "pass" if b.passed else "fail", b.anchor])
    return buf.getvalue()


def write_report(report: dict, path: str, bounds=()) -> None:
    """Write ``path`` as JSON and, next to it, a CSV table of the bound checks."""
    atomic_write(path, report_to_json(report))
    root, _ = os.path.splitext(path)
    atomic_write(root + ".csv", bounds_to_csv(bounds))

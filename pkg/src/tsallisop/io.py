"""JSON documents: matrix files, vectors, reports.

Matrices are ``{"n": 2, "data": [[...], [...]]}``.  Floats are written with
17 significant digits so every double survives a write/read round trip.
"""

import json
import math

import numpy as np

SYMMETRY_TOL = 1e-10


class FormatError(ValueError):
    pass


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise FormatError(f"cannot serialize non-finite number {x!r}")
    if x.is_integer():
        # "1.0" rather than "1" so integral values stay float literals
        return repr(x)
    return format(x, ".17g")


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _emit(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    """Serialize to JSON text with 17-significant-digit floats."""
    return _emit(obj, indent, 0) + "\n"


def matrix_to_doc(m):
    m = np.asarray(m, dtype=np.float64)
    return {"n": int(m.shape[0]), "data": m.tolist()}


def matrix_from_doc(doc):
    """Validate a matrix document and return the symmetrized array."""
    if not isinstance(doc, dict) or "data" not in doc:
        raise FormatError('matrix document must be an object with "n" and "data"')
    try:
        data = np.array(doc["data"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix data is not numeric: {exc}") from None
    n = doc.get("n", data.shape[0] if data.ndim else None)
    if not isinstance(n, int) or n < 1 or data.ndim != 2 or data.shape != (n, n):
        raise FormatError(f'matrix data must be n x n with n = {n!r}, got shape {data.shape}')
    if not np.all(np.isfinite(data)):
        raise FormatError("matrix has non-finite entries")
    asym = float(np.max(np.abs(data - data.T)))
    if asym > SYMMETRY_TOL * (1.0 + float(np.max(np.abs(data)))):
        raise FormatError(f"matrix not symmetric: max |H - H^T| = {asym:.3g}")
    return 0.5 * (data + data.T)


def write_matrix(path, m):
    with open(path, "w") as fh:
        fh.write(dumps(matrix_to_doc(m)))


def read_matrix(path):
    with open(path) as fh:
        return matrix_from_doc(json.load(fh))


def load_json_arg(value):
    """Parse a CLI argument that is either inline JSON or a path to a JSON file."""
    text = value.strip()
    if text and (text[0] in "[{-" or text[0].isdigit()):
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
    try:
        with open(value) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {value!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{value!r} is not valid JSON: {exc}") from None


def matrix_arg(value):
    doc = load_json_arg(value)
    if isinstance(doc, list):
        doc = {"n": len(doc), "data": doc}
    return matrix_from_doc(doc)


def vector_arg(value):
    doc = load_json_arg(value)
    if isinstance(doc, dict) and "p" in doc:
        doc = doc["p"]
    v = np.array(doc, dtype=np.float64)
    if v.ndim != 1:
        raise FormatError("expected a JSON array of numbers")
    return v

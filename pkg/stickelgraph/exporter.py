"""Reading and writing digraphs, and exporting verification rows as JSON or CSV."""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from .digraph import Digraph, Edge
from .errors import DigraphFormatError
from .groups import FiniteAbelianGroup
from .models import CHECK_NAMES, VerificationRow
from .voltage import VoltageAssignment

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    'check', 'p', 'ell', 'status', 'h_minus', 'bf_torsion_factors', 'bf_free_rank',
    'm_y', 'm_y_plus', 'g_star_y', 'g_star_y_plus', 'theorem_a_holds',
    'three_way_m_agreement', 'notice',
)

PathLike = Union[str, Path]


def _require_list(data: Dict, key: str) -> List:
    value = data.get(key)
    if not isinstance(value, list):
        raise DigraphFormatError("expected a list", key)
    return value


def _require_string(entry: Dict, key: str, position: str) -> str:
    value = entry.get(key)
    if not isinstance(value, str) or not value:
        raise DigraphFormatError("expected a non-empty string", f"{position}.{key}")
    return value


def parse_digraph(data: Any) -> Tuple[Digraph, Dict[str, List[int]]]:
    """Build a digraph from decoded JSON.

    Returns the digraph and the voltage vectors found on its edges.

    Raises:
        DigraphFormatError: With the JSON position of the offending entry
    """
    if not isinstance(data, dict):
        raise DigraphFormatError("expected an object with 'vertices' and 'edges'")
    vertices = _require_list(data, 'vertices')
    index: Dict[str, int] = {}
    for i, label in enumerate(vertices):
        if not isinstance(label, str) or not label:
            raise DigraphFormatError("expected a non-empty string", f"vertices[{i}]")
        if label in index:
            raise DigraphFormatError(f"duplicate vertex '{label}'", f"vertices[{i}]")
        index[label] = i
    edges = []
    voltages: Dict[str, List[int]] = {}
    seen = set()
    for k, entry in enumerate(_require_list(data, 'edges')):
        position = f"edges[{k}]"
        if not isinstance(entry, dict):
            raise DigraphFormatError("expected an object", position)
        label = _require_string(entry, 'id', position)
        if label in seen:
            raise DigraphFormatError(f"duplicate edge '{label}'", f"{position}.id")
        seen.add(label)
        ends = []
        for key in ('from', 'to'):
            vertex = _require_string(entry, key, position)
            if vertex not in index:
                raise DigraphFormatError(f"unknown vertex '{vertex}'", f"{position}.{key}")
            ends.append(index[vertex])
        edges.append(Edge(label, ends[0], ends[1]))
        if 'voltage' in entry:
            voltage = entry['voltage']
            if isinstance(voltage, int) and not isinstance(voltage, bool):
                voltage = [voltage]
            if not isinstance(voltage, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                                        for x in voltage):
                raise DigraphFormatError("expected an integer vector", f"{position}.voltage")
            voltages[label] = voltage
    return Digraph(tuple(vertices), tuple(edges)), voltages


def _load_json(path: PathLike):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise DigraphFormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}")
    except OSError as exc:
        raise DigraphFormatError(f"cannot read file: {exc.strerror}", str(path))


def read_digraph_json(path: PathLike) -> Tuple[Digraph, Dict[str, List[int]]]:
    """Read a digraph file; see :func:`parse_digraph`.

    Raises:
        DigraphFormatError: If the file is unreadable, not JSON, or malformed
    """
    return parse_digraph(_load_json(path))


def read_voltage_assignment(path: PathLike, cyclic_orders: Optional[Sequence[int]] = None) -> VoltageAssignment:
    """Read a digraph file whose edges carry voltages.

    The group comes from ``cyclic_orders`` or, failing that, from a top-level
    ``group`` list in the file.

    Raises:
        DigraphFormatError: If the group is missing or invalid, or a voltage has the wrong length
    """
    data = _load_json(path)
    digraph, voltages = parse_digraph(data)
    if cyclic_orders is None:
        cyclic_orders = data.get('group')
        if not isinstance(cyclic_orders, list):
            raise DigraphFormatError("no group given for the voltages", 'group')
    if not all(isinstance(n, int) and not isinstance(n, bool) and n > 0 for n in cyclic_orders):
        raise DigraphFormatError("group orders must be positive integers", 'group')
    group = FiniteAbelianGroup(tuple(cyclic_orders))
    labels = []
    for k, e in enumerate(digraph.edges):
        voltage = voltages.get(e.label)
        if voltage is None:
            raise DigraphFormatError("missing voltage", f"edges[{k}].voltage")
        if len(voltage) != len(group.cyclic_orders):
            raise DigraphFormatError(
                f"expected {len(group.cyclic_orders)} components, got {len(voltage)}", f"edges[{k}].voltage")
        labels.append(tuple(voltage))
    return VoltageAssignment(digraph, group, tuple(labels))


def digraph_to_json(d: Digraph, voltage: Optional[VoltageAssignment] = None) -> Dict:
    edges = []
    for k, e in enumerate(d.edges):
        entry: Dict[str, Any] = {'id': e.label, 'from': d.vertex_labels[e.origin], 'to': d.vertex_labels[e.target]}
        if voltage is not None:
            entry['voltage'] = list(voltage.labels[k])
        edges.append(entry)
    data: Dict[str, Any] = {'vertices': list(d.vertex_labels), 'edges': edges}
    if voltage is not None:
        data['group'] = list(voltage.group.cyclic_orders)
    return data


def write_atomic(path: PathLike, text: str) -> None:
    """Write text to path through a temporary file in the same directory."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path('.'), prefix=f".{path.name}.", suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("Wrote %s", path)


def write_digraph_json(path: PathLike, d: Digraph, voltage: Optional[VoltageAssignment] = None) -> None:
    write_atomic(path, dumps(digraph_to_json(d, voltage)))


def dumps(data: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(data, indent=2, ensure_ascii=False) + '\n'


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ';'.join(_cell(v) for v in value)
    return str(value)


def row_to_csv_record(row: VerificationRow) -> Dict[str, str]:
    """Flatten a row into the frozen CSV columns."""
    flat = dict(row.record)
    flat.update(check=CHECK_NAMES[row.check], p=row.p, ell=row.ell, status=row.status, notice=row.notice)
    return {column: _cell(flat.get(column)) for column in CSV_COLUMNS}


def rows_to_csv(rows: Iterable[VerificationRow]) -> str:
    frame = pd.DataFrame([row_to_csv_record(r) for r in rows], columns=list(CSV_COLUMNS), dtype=str)
    return frame.to_csv(index=False, lineterminator='\n')


def rows_to_json(rows: Iterable[VerificationRow]) -> str:
    return dumps([r.to_dict() for r in rows])


def export_rows(rows: Sequence[VerificationRow], fmt: str = 'json', path: Optional[PathLike] = None) -> str:
    """Render rows as 'json' or 'csv'; write atomically when a path is given.

    Returns:
        The rendered text
    """
    if fmt == 'csv':
        text = rows_to_csv(rows)
    elif fmt == 'json':
        text = rows_to_json(rows)
    else:
        raise ValueError(f"Unknown format '{fmt}'")
    if path is not None:
        write_atomic(path, text)
    return text

"""Exact checks of coisotropic structures on quasi-symplectic groupoids.

Scenarios are plain dicts in the scenario-file format, reports come back as
dicts, and matrix entries are Fractions.
"""

import json
from fractions import Fraction

from . import _core
from ._core import SchemaError

__all__ = [
    "SchemaError",
    "catalog",
    "verify",
    "verify_document",
    "reduce",
    "dump",
    "content_hash",
    "graph_two_form",
    "graph_bivector",
    "pullback",
    "passed",
]


def _scenario(s):
    if isinstance(s, str):
        s = {"name": s}
    return json.dumps(s)


def _matrix(rows):
    rows = [list(r) for r in rows]
    cols = len(rows[0]) if rows else 0
    if any(len(r) != cols for r in rows):
        raise ValueError("ragged matrix")
    data = [str(Fraction(x)) for r in rows for x in r]
    return json.dumps({"rows": len(rows), "cols": cols, "data": data})


def _rows(m):
    data = [Fraction(x) for x in m["data"]]
    c = m["cols"]
    return [data[i * c:(i + 1) * c] for i in range(m["rows"])]


def _dirac(text):
    d = json.loads(text)
    return {"n": d["n"], "basis": _rows(d["basis"])}


def _dirac_arg(d):
    return json.dumps({"n": d["n"], "basis": json.loads(_matrix(d["basis"]))})


def catalog():
    return json.loads(_core.catalog())


def verify(scenario, suite="all"):
    """Run one suite, or all of them, on a scenario name or scenario dict."""
    return json.loads(_core.verify(_scenario(scenario), suite))


def verify_document(doc):
    """Check a gfb-v1, cd-v1 or med-v1 document."""
    return json.loads(_core.verify_document(json.dumps(doc)))


def reduce(scenario):
    """Reduced Dirac fibers of a circle-hamiltonian scenario and the report."""
    return json.loads(_core.reduce(_scenario(scenario)))


def dump(scenario):
    return json.loads(_core.dump(_scenario(scenario)))


def content_hash(bundle):
    return _core.content_hash(json.dumps(bundle))


def graph_two_form(w):
    return _dirac(_core.graph_two_form(_matrix(w)))


def graph_bivector(pi):
    return _dirac(_core.graph_bivector(_matrix(pi)))


def pullback(f, dirac):
    """f^* L for f : W -> V given as a dim V x dim W matrix."""
    return _dirac(_core.pullback(_matrix(f), _dirac_arg(dirac)))


def passed(report):
    """True when no check failed and no hypothesis was violated."""
    return all(c["status"] == "pass" or c.get("diagnostic", False) for c in report["checks"])

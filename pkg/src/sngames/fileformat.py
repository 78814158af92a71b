"""JSON network and profile documents.

Network document::

    {"c0": "1",
     "products": ["t1", "t2"],
     "nodes": [{"id": "1", "products": ["t1"], "thresholds": {"t1": "1/4"}}],
     "edges": [{"from": "1", "to": "2", "weight": "1/2"}]}

Rationals are strings "p" or "p/q" (q > 0); decimals are rejected. The
opt-out strategy is JSON ``null`` in profile documents, so no product name
is reserved. Serialisation is canonical: reduced rationals, sorted keys,
nodes sorted by id, edges by (from, to).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import FormatError
from .model import JointStrategy, SocialNetwork, profile_from_mapping, validate_network

_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def parse_rational(text, where: str = "value") -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise FormatError(f"{where}: expected a rational string 'p' or 'p/q', got {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise FormatError(f"{where}: zero denominator in {text!r}")
    return Fraction(int(num), int(den or 1))


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise FormatError(f"duplicate member {k!r}")
        out[k] = v
    return out


def _load(text: str):
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, line=exc.lineno, column=exc.colno) from None


def _expect(obj, kind, where):
    if not isinstance(obj, kind):
        raise FormatError(f"{where}: expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _members(obj: dict, required: set, optional: set, where: str) -> None:
    missing = required - set(obj)
    extra = set(obj) - required - optional
    if missing:
        raise FormatError(f"{where}: missing member(s) {sorted(missing)}")
    if extra:
        raise FormatError(f"{where}: unexpected member(s) {sorted(extra)}")


def _string_list(obj, where):
    items = _expect(obj, list, where)
    for x in items:
        _expect(x, str, where)
    return items


def parse_network(text: str) -> SocialNetwork:
    """Parse and validate a network document.

    Raises :class:`FormatError` (code ``syntax-error``) for malformed
    documents and :class:`NetworkError` for constraint violations.
    """
    doc = _expect(_load(text), dict, "document")
    _members(doc, {"c0", "products", "nodes", "edges"}, set(), "document")
    c0 = parse_rational(doc["c0"], "c0")
    products = _string_list(doc["products"], "products")
    nodes, psets, thresholds = [], {}, {}
    for k, node in enumerate(_expect(doc["nodes"], list, "nodes")):
        where = f"nodes[{k}]"
        _expect(node, dict, where)
        _members(node, {"id", "products", "thresholds"}, set(), where)
        i = _expect(node["id"], str, f"{where}.id")
        nodes.append(i)
        psets[i] = set(_string_list(node["products"], f"{where}.products"))
        for t, v in _expect(node["thresholds"], dict, f"{where}.thresholds").items():
            thresholds[(i, t)] = parse_rational(v, f"{where}.thresholds.{t}")
    edges = []
    for k, edge in enumerate(_expect(doc["edges"], list, "edges")):
        where = f"edges[{k}]"
        _expect(edge, dict, where)
        _members(edge, {"from", "to", "weight"}, set(), where)
        edges.append((_expect(edge["from"], str, f"{where}.from"),
                      _expect(edge["to"], str, f"{where}.to"),
                      parse_rational(edge["weight"], f"{where}.weight")))
    net = SocialNetwork(nodes, edges, psets, thresholds, c0, products=products)
    if len(set(products)) != len(products):
        raise FormatError("products: duplicate product id")
    validate_network(net)
    return net


def network_document(net: SocialNetwork) -> dict:
    return {
        "c0": str(net.c0),
        "products": list(net.products),
        "nodes": [
            {"id": i,
             "products": sorted(net.product_sets[i]),
             "thresholds": {t: str(net.thresholds[(i, t)]) for t in sorted(net.product_sets[i])}}
            for i in net.nodes
        ],
        "edges": [{"from": e.source, "to": e.target, "weight": str(e.weight)} for e in net.edges],
    }


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def serialize_network(net: SocialNetwork) -> str:
    return dumps(network_document(net))


def parse_profile(text: str, net: SocialNetwork) -> JointStrategy:
    doc = _expect(_load(text), dict, "profile")
    for i, x in doc.items():
        if x is not None and not isinstance(x, str):
            raise FormatError(f"profile[{i!r}]: expected a product id or null")
    return profile_from_mapping(net, doc)


def serialize_profile(net: SocialNetwork, s: JointStrategy) -> str:
    return dumps(dict(zip(net.nodes, s)))

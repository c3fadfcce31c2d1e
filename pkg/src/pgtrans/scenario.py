"""Scenario files: a module definition plus what to run on it, stored as YAML.

Example::

    name: diag_0_5
    label: diag(0,5)
    module:
      trunc: 8
      prime: 2
      alpha: "5"
      nabla:
        - ["0", "0"]
        - ["0", "5"]
      phi:
        - ["1", "0"]
        - ["0", "1"]
    k: [1, 2, 3]
    suites: [keylm, rem221]
    truncations: [8, 12]

Matrix entries are polynomial strings in t, or in X when they mention X.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import yaml

from .pgmod import TorsionModule
from .series import TruncSeries


class ScenarioError(ValueError):
    """A malformed scenario; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where = source + (":%d" % line if line else "") + ": "
        elif line:
            where = "line %d: " % line
        super().__init__(where + message)


class _Loader(yaml.SafeLoader):
    """SafeLoader that remembers the line of every mapping value."""


def _construct_mapping(loader, node):
    out = loader.construct_mapping(node, deep=True)
    lines = {}
    for key_node, value_node in node.value:
        lines[loader.construct_object(key_node)] = value_node.start_mark.line + 1
    out["__lines__"] = lines
    out["__line__"] = node.start_mark.line + 1
    return out


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)

_TOP_KEYS = {"name", "label", "module", "k", "suites", "truncations", "description"}
_MODULE_KEYS = {"trunc", "prime", "alpha", "nabla", "phi"}


def _entry_text(x):
    if isinstance(x, bool) or x is None:
        raise TypeError
    if isinstance(x, (int, float)):
        if isinstance(x, float) and not x.is_integer():
            raise TypeError
        return str(int(x))
    return str(x).strip()


def parse_entry(text, trunc):
    """A matrix entry as a TruncSeries in t."""
    coord = "X" if "X" in text else "t"
    s = TruncSeries.parse(text, trunc, coord)
    return s.to_t() if coord == "X" else s


@dataclass
class Scenario:
    name: str
    trunc: int
    prime: int
    alpha: Fraction
    nabla: list
    phi: list = None
    label: str = ""
    k: list = field(default_factory=lambda: [1])
    suites: list = field(default_factory=list)
    truncations: list = field(default_factory=list)
    description: str = ""

    @property
    def rank(self):
        return len(self.nabla)

    def build(self, trunc=None, alpha=None):
        """The TorsionModule this scenario describes (optionally re-truncated or re-parametrized)."""
        N = self.trunc if trunc is None else int(trunc)
        nab = [[parse_entry(x, N) for x in row] for row in self.nabla]
        phi = None if self.phi is None else [[parse_entry(x, N) for x in row] for row in self.phi]
        return TorsionModule(nab, N, self.prime, phi, alpha=self.alpha if alpha is None else Fraction(alpha),
                             label=self.label or self.name)

    def as_dict(self):
        module = {"trunc": self.trunc, "prime": self.prime, "alpha": str(self.alpha),
                  "nabla": [list(row) for row in self.nabla]}
        if self.phi is not None:
            module["phi"] = [list(row) for row in self.phi]
        out = {"name": self.name}
        if self.label:
            out["label"] = self.label
        if self.description:
            out["description"] = self.description
        out["module"] = module
        out["k"] = list(self.k)
        out["suites"] = list(self.suites)
        out["truncations"] = list(self.truncations)
        return out

    def dump(self):
        return yaml.safe_dump(self.as_dict(), sort_keys=False, default_flow_style=None, width=100)


def _require(cond, msg, line, source):
    if not cond:
        raise ScenarioError(msg, line, source)


def _int_list(value, key, line, source):
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    _require(isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value),
             "%s must be an integer or a list of integers" % key, line, source)
    return list(value)


def _matrix(value, key, line, source, trunc):
    _require(isinstance(value, list) and value and all(isinstance(r, list) for r in value),
             "%s must be a list of rows" % key, line, source)
    n = len(value)
    out = []
    for row in value:
        _require(len(row) == n, "%s must be square (%d rows, a row of length %d)" % (key, n, len(row)), line, source)
        texts = []
        for x in row:
            try:
                text = _entry_text(x)
                parse_entry(text, trunc)
            except (TypeError, ValueError) as exc:
                raise ScenarioError("bad %s entry %r: %s" % (key, x, exc or "not a polynomial"), line, source) from None
            texts.append(text)
        out.append(texts)
    return out


def from_data(data, source=None):
    _require(isinstance(data, dict), "scenario must be a mapping", 1, source)
    lines = data.get("__lines__", {})
    top = data.get("__line__", 1)
    for key in data:
        if not key.startswith("__"):
            _require(key in _TOP_KEYS, "unknown key %r" % key, lines.get(key, top), source)
    _require("name" in data, "missing key 'name'", top, source)
    _require("module" in data, "missing key 'module'", top, source)
    mod = data["module"]
    _require(isinstance(mod, dict), "module must be a mapping", lines.get("module", top), source)
    mlines = mod.get("__lines__", {})
    mtop = mod.get("__line__", top)
    for key in mod:
        if not key.startswith("__"):
            _require(key in _MODULE_KEYS, "unknown module key %r" % key, mlines.get(key, mtop), source)
    for key in ("trunc", "nabla"):
        _require(key in mod, "missing module key %r" % key, mtop, source)
    trunc = mod["trunc"]
    _require(isinstance(trunc, int) and not isinstance(trunc, bool) and trunc >= 1,
             "trunc must be a positive integer", mlines.get("trunc", mtop), source)
    prime = mod.get("prime", 2)
    _require(prime in (2, 3, 5, 7, 11, 13), "prime must be a small prime, got %r" % (prime,),
             mlines.get("prime", mtop), source)
    _require("alpha" in mod, "missing module key 'alpha' (it is not derived from the Sen weights)", mtop, source)
    try:
        alpha = Fraction(_entry_text(mod["alpha"]))
    except (TypeError, ValueError, ZeroDivisionError):
        raise ScenarioError("alpha must be rational, got %r" % (mod["alpha"],), mlines.get("alpha", mtop), source) from None
    nabla = _matrix(mod["nabla"], "nabla", mlines.get("nabla", mtop), source, trunc)
    phi = None
    if mod.get("phi") is not None:
        phi = _matrix(mod["phi"], "phi", mlines.get("phi", mtop), source, trunc)
        _require(len(phi) == len(nabla), "phi and nabla must have the same size", mlines.get("phi", mtop), source)
    ks = _int_list(data.get("k", [1]), "k", lines.get("k", top), source)
    _require(all(k >= 0 for k in ks), "k must be non-negative", lines.get("k", top), source)
    suites = data.get("suites", [])
    _require(isinstance(suites, list) and all(isinstance(s, str) for s in suites),
             "suites must be a list of names", lines.get("suites", top), source)
    truncs = _int_list(data.get("truncations", []), "truncations", lines.get("truncations", top), source)
    sc = Scenario(str(data["name"]), trunc, prime, alpha, nabla, phi, str(data.get("label", "")), ks,
                  list(suites), truncs, str(data.get("description", "")))
    try:
        sc.build()
    except ValueError as exc:
        raise ScenarioError("invalid module: %s" % exc, mtop, source) from None
    return sc


def loads(text, source=None):
    try:
        data = yaml.load(text, Loader=_Loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ScenarioError("YAML syntax error: %s" % problem, mark.line + 1 if mark else None, source) from None
    return from_data(data, source)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), str(path))


def dumps(sc):
    return sc.dump()


def bundled_names():
    root = resources.files("pgtrans") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def bundled(name):
    root = resources.files("pgtrans") / "scenarios"
    path = root / (name + ".yaml")
    if not path.is_file():
        raise KeyError("no bundled scenario %r" % name)
    return loads(path.read_text(encoding="utf-8"), "<bundled %s>" % name)


def bundled_all():
    return [bundled(n) for n in bundled_names()]

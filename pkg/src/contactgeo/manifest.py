"""TOML manifest ingestion for charts, metrics, and contact data.

A manifest either names a registry entry (``builtin = "..."``) or
declares its own ``[chart]`` and ``[metric]`` sections, with an
optional ``[contact]`` section carrying phi/xi/eta components and an
optional ``[probes]`` section tuning count/seed/tolerance.  Every
expression is parsed against the declared coordinates at load time so
bad input fails at the file, not mid-suite.
"""

from dataclasses import dataclass

try:
    import tomllib
except ImportError:                                    # python < 3.11
    import tomli as tomllib

from . import atlas, exprs
from .contact import AlmostContactStructure
from .fields import Chart, ChartError, MetricField


class ManifestError(ValueError):
    """Malformed manifest: carries the offending file and key."""


@dataclass(frozen=True)
class Manifest:
    path: str
    label: str
    structure: object          # AlmostContactStructure, contact possibly bare
    has_contact: bool
    probe_count: int = None
    seed: int = None
    tolerance: float = None

    @property
    def metric(self):
        return self.structure.g

    @property
    def chart(self):
        return self.structure.g.chart

    def require_contact(self, what):
        if not self.has_contact:
            raise ManifestError(
                f"{self.path}: {what} needs a [contact] section "
                f"(or a builtin), but the manifest declares none")
        return self.structure


def _fail(path, msg):
    raise ManifestError(f"{path}: {msg}")


def _component_keys(names, i, j):
    'Accepted spellings for the (i, j) metric entry, canonical first.'
    a, b = names[i], names[j]
    keys = [f"g_{a}_{b}"]
    if all(len(n) == 1 for n in names):
        keys.insert(0, f"g_{a}{b}")
    return keys


def _check_expr(path, where, text, names):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return str(text)
    if not isinstance(text, str):
        _fail(path, f"{where}: expected an expression string, got {text!r}")
    try:
        tree = exprs.parse(text, coords=names)
    except exprs.ExprError as e:
        _fail(path, f"{where}: {e}")
    extra = exprs.free_vars(tree) - set(names)
    if extra:
        _fail(path, f"{where}: unknown symbols {sorted(extra)} "
                    f"(coordinates are {list(names)})")
    return text


def _load_chart(path, data):
    sec = data.get("chart", {})
    if not isinstance(sec, dict):
        _fail(path, "[chart] must be a table")
    names = sec.get("names", list(exprs.DEFAULT_COORDS))
    box = sec.get("box", [[-1.0, 1.0]] * 3)
    try:
        names = tuple(str(n) for n in names)
        box = tuple((float(lo), float(hi)) for lo, hi in box)
        return Chart(names=names, box=box)
    except ChartError as e:
        _fail(path, f"[chart]: {e}")
    except (TypeError, ValueError) as e:
        _fail(path, f"[chart]: malformed names or box ({e})")


def _load_metric(path, data, chart):
    sec = data.get("metric")
    if sec is None:
        _fail(path, "missing [metric] section (and no builtin named)")
    if not isinstance(sec, dict):
        _fail(path, "[metric] must be a table")
    names = chart.names
    upper = {}
    claimed = set()
    for i in range(3):
        for j in range(i, 3):
            keys = _component_keys(names, i, j)
            found = [k for k in keys if k in sec]
            if len(found) > 1:
                _fail(path, f"[metric]: duplicate spellings {found}")
            if found:
                claimed.add(found[0])
                upper[(i, j)] = _check_expr(
                    path, f"[metric] {found[0]}", sec[found[0]], names)
            elif i == j:
                _fail(path, f"[metric]: missing required key {keys[0]}")
            # absent off-diagonal entries default to zero
    stray = set(sec) - claimed
    if stray:
        _fail(path, f"[metric]: unrecognized keys {sorted(stray)}")
    return MetricField.from_upper(chart, upper, label=path)


def _component_list(path, where, raw, names, n):
    if not isinstance(raw, (list, tuple)) or len(raw) != n:
        _fail(path, f"{where}: expected a list of {n} expressions")
    return tuple(_check_expr(path, f"{where}[{k}]", v, names)
                 for k, v in enumerate(raw))


def _load_contact(path, data, chart):
    sec = data.get("contact")
    if sec is None:
        return None
    if not isinstance(sec, dict):
        _fail(path, "[contact] must be a table")
    missing = [k for k in ("phi", "xi", "eta") if k not in sec]
    if missing:
        _fail(path, f"[contact]: requires phi, xi and eta together; "
                    f"missing {missing}")
    stray = set(sec) - {"phi", "xi", "eta"}
    if stray:
        _fail(path, f"[contact]: unrecognized keys {sorted(stray)}")
    names = chart.names
    xi = _component_list(path, "[contact] xi", sec["xi"], names, 3)
    eta = _component_list(path, "[contact] eta", sec["eta"], names, 3)
    raw_phi = sec["phi"]
    if not isinstance(raw_phi, (list, tuple)) or len(raw_phi) != 3:
        _fail(path, "[contact] phi: expected a 3x3 array of expressions")
    phi = tuple(_component_list(path, f"[contact] phi[{r}]", row, names, 3)
                for r, row in enumerate(raw_phi))
    return phi, xi, eta


def _load_probes(path, data):
    sec = data.get("probes", {})
    if not isinstance(sec, dict):
        _fail(path, "[probes] must be a table")
    stray = set(sec) - {"count", "seed", "tolerance"}
    if stray:
        _fail(path, f"[probes]: unrecognized keys {sorted(stray)}")
    count = sec.get("count")
    seed = sec.get("seed")
    tol = sec.get("tolerance")
    if count is not None and (not isinstance(count, int) or count <= 0):
        _fail(path, f"[probes]: count must be a positive integer, got {count}")
    if seed is not None and not isinstance(seed, int):
        _fail(path, f"[probes]: seed must be an integer, got {seed}")
    if tol is not None:
        try:
            tol = float(tol)
        except (TypeError, ValueError):
            _fail(path, f"[probes]: tolerance must be a real, got {tol}")
        if tol <= 0:
            _fail(path, f"[probes]: tolerance must be positive, got {tol}")
    return count, seed, tol


def from_builtin(name, path="<builtin>"):
    'Wrap a registry structure in a Manifest.'
    try:
        acs = atlas.builtin(name)
    except KeyError as e:
        raise ManifestError(f"{path}: {e.args[0]}") from None
    return Manifest(path=path, label=name, structure=acs, has_contact=True)


def load_manifest(path):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ManifestError(f"{path}: no such file") from None
    except tomllib.TOMLDecodeError as e:
        raise ManifestError(f"{path}: {e}") from None
    if not isinstance(data, dict):
        _fail(path, "top level must be a table")

    count, seed, tol = _load_probes(path, data)
    name = data.get("builtin")
    if name is not None:
        stray = set(data) - {"builtin", "probes"}
        if stray:
            _fail(path, f"builtin manifests take no other sections; "
                        f"found {sorted(stray)}")
        base = from_builtin(name, path)
        return Manifest(path=path, label=name, structure=base.structure,
                        has_contact=True, probe_count=count, seed=seed,
                        tolerance=tol)

    stray = set(data) - {"chart", "metric", "contact", "probes"}
    if stray:
        _fail(path, f"unrecognized top-level keys {sorted(stray)}")
    chart = _load_chart(path, data)
    g = _load_metric(path, data, chart)
    contact_data = _load_contact(path, data, chart)
    if contact_data is None:
        # trivial placeholder structure; suites that need contact data
        # must go through require_contact
        phi = (("0", "0", "0"),) * 3
        xi = ("0", "0", "0")
        eta = ("0", "0", "0")
        acs = AlmostContactStructure(g, phi, xi, eta, label=path)
        return Manifest(path=path, label=path, structure=acs,
                        has_contact=False, probe_count=count, seed=seed,
                        tolerance=tol)
    phi, xi, eta = contact_data
    acs = AlmostContactStructure(g, phi, xi, eta, label=path)
    return Manifest(path=path, label=path, structure=acs, has_contact=True,
                    probe_count=count, seed=seed, tolerance=tol)

"""Scenario files: one plain-text description drives every CLI subcommand.

Grammar (sections in brackets, ``key = value`` entries, ``#`` comments;
geometric values are Python complex literals, one token each):

    [domain]
    omega = disk 0 1              # disk c r | halfplane n c | polygon v... | fullplane
    zeta0 = 0

    [sets]
    L  = disk 0 0.4               # primitives joined with ' + ' (spaced):
    K1 = segment 1.5 2.5          # disk c r | segment a b | arc c r t0 t1
    K2 = segment 2-1.5j 2+1.5j    # | polygon v1 v2 v3 ...
    E  = exhaustion 4             # enables the derived names E1..E4

    [neighborhoods]
    U1 = halfplane 1 0.9          # open Re(z conj(n)) < c | disk c r; ' + ' unions
    U2 = halfplane -1 -1.1

    [sequences]
    lambda1 = poly 0 1            # integer polynomial in n, low to high
    lambda2 = poly 0 0 1          # | geom base scale | explicit v1 v2 ...

    [targets]
    g = poly 0                    # complex coefficients, low to high
    f1 on K1 = poly 1             # | const c | recip center power
    f2 on K2 = poly 0 1

    [tolerances]
    eps = 0.1
    s = 10
    trials = 16
    horizon = 64
    levels = 2 4 8 16 32
    mesh = 0.05                   # optional sampling mesh for every set
    theta0 = 0.99                 # declared ceiling for measured shrink factors
    invariance_final = 1e-3

Subcommand sections ([fekete], [capacity], [green], [bw], [verify], [gaps],
[invariance]) hold the extra inputs their command needs; keys are validated
here, values are parsed by the command.  Relative paths inside a scenario
resolve against the scenario file's directory.  Every failure raises
ScenarioError naming the offending line and field.
"""

from __future__ import annotations

import dataclasses
import os
import re
from dataclasses import dataclass

from .bernstein_walsh import RecipPower
from .construct import ConstructionScenario
from .geometry import (
    ArcPrim,
    CompactSetSample,
    DiskPrim,
    DomainSpec,
    OpenDisk,
    OpenHalfPlane,
    PolygonPrim,
    RegionUnion,
    SegmentPrim,
    make_exhaustion,
)
from .polynomials import ComplexPolynomial
from .sequences import IndexSequence, SequenceFamily

_SECTIONS = (
    "domain",
    "sets",
    "neighborhoods",
    "sequences",
    "targets",
    "tolerances",
    "fekete",
    "capacity",
    "green",
    "bw",
    "verify",
    "gaps",
    "invariance",
)

_COMMAND_KEYS = {
    "fekete": ("set", "n"),
    "capacity": ("set", "n"),
    "green": ("set", "n", "points"),
    "bw": ("set", "function", "tau", "clearance", "region", "contour", "nodes"),
    "verify": ("coeffs",),
    "gaps": ("coeffs", "pairs", "ratio_target", "decay_target", "radii"),
    "invariance": ("coeffs", "centers", "k_set", "p", "zeta_count"),
}


class ScenarioError(ValueError):
    """Parse or cross-reference failure, located by line and field."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        prefix = ": ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.line = line
        self.field = field


# ---------------------------------------------------------------------------
# token helpers


def _complex(tok: str, line: int, field: str) -> complex:
    try:
        return complex(tok)
    except ValueError:
        raise ScenarioError(f"expected a complex number, got {tok!r}", line, field)


def _float(tok: str, line: int, field: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ScenarioError(f"expected a real number, got {tok!r}", line, field)


def _int(tok: str, line: int, field: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ScenarioError(f"expected an integer, got {tok!r}", line, field)


def _arity(toks, count: int, line: int, field: str):
    if len(toks) != count:
        raise ScenarioError(f"expected {count} value(s), got {len(toks)}", line, field)


# ---------------------------------------------------------------------------
# value builders


def _build_primitive(toks, line, field):
    kind, rest = toks[0], toks[1:]
    if kind == "disk":
        _arity(rest, 2, line, field)
        return DiskPrim(_complex(rest[0], line, field), _float(rest[1], line, field))
    if kind == "segment":
        _arity(rest, 2, line, field)
        return SegmentPrim(_complex(rest[0], line, field), _complex(rest[1], line, field))
    if kind == "arc":
        _arity(rest, 4, line, field)
        return ArcPrim(
            _complex(rest[0], line, field),
            _float(rest[1], line, field),
            _float(rest[2], line, field),
            _float(rest[3], line, field),
        )
    if kind == "polygon":
        if len(rest) < 3:
            raise ScenarioError("polygon needs at least three vertices", line, field)
        return PolygonPrim(tuple(_complex(t, line, field) for t in rest))
    raise ScenarioError(f"unknown set primitive {kind!r}", line, field)


def _union_parts(value: str, line: int, field: str):
    """Token groups separated by a bare '+' (so complex literals stay whole)."""
    parts, current = [], []
    for tok in value.split():
        if tok == "+":
            parts.append(current)
            current = []
        else:
            current.append(tok)
    parts.append(current)
    if any(not p for p in parts):
        raise ScenarioError("empty part between '+'", line, field)
    return parts


def _build_set(value: str, line: int, field: str, mesh: float | None) -> CompactSetSample:
    prims = [
        _build_primitive(toks, line, field)
        for toks in _union_parts(value, line, field)
    ]
    try:
        return CompactSetSample(prims, mesh=mesh)
    except ValueError as exc:
        raise ScenarioError(str(exc), line, field)


def _build_region(value: str, line: int, field: str):
    members = []
    for toks in _union_parts(value, line, field):
        kind, rest = toks[0], toks[1:]
        if kind == "halfplane":
            _arity(rest, 2, line, field)
            members.append(
                OpenHalfPlane(_complex(rest[0], line, field), _float(rest[1], line, field))
            )
        elif kind == "disk":
            _arity(rest, 2, line, field)
            members.append(
                OpenDisk(_complex(rest[0], line, field), _float(rest[1], line, field))
            )
        else:
            raise ScenarioError(f"unknown region kind {kind!r}", line, field)
    return members[0] if len(members) == 1 else RegionUnion(tuple(members))


def _build_domain(value: str, line: int, field: str, zeta0: complex) -> DomainSpec:
    toks = value.split()
    kind, rest = toks[0], toks[1:]
    try:
        if kind == "disk":
            _arity(rest, 2, line, field)
            return DomainSpec.disk(
                _complex(rest[0], line, field), _float(rest[1], line, field), zeta0
            )
        if kind == "halfplane":
            _arity(rest, 2, line, field)
            return DomainSpec.halfplane(
                _complex(rest[0], line, field), _float(rest[1], line, field), zeta0
            )
        if kind == "polygon":
            if len(rest) < 3:
                raise ScenarioError("polygon needs at least three vertices", line, field)
            return DomainSpec.polygon(tuple(_complex(t, line, field) for t in rest), zeta0)
        if kind == "fullplane":
            _arity(rest, 0, line, field)
            return DomainSpec.fullplane(zeta0)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc), line, field)
    raise ScenarioError(f"unknown domain kind {kind!r}", line, field)


def _build_sequence(value: str, line: int, field: str, label: str) -> IndexSequence:
    toks = value.split()
    kind, rest = toks[0], toks[1:]
    if kind == "poly":
        if not rest:
            raise ScenarioError("poly needs at least one coefficient", line, field)
        return IndexSequence.poly([_int(t, line, field) for t in rest], label=label)
    if kind == "geom":
        if len(rest) not in (1, 2):
            raise ScenarioError("geom takes a base and an optional scale", line, field)
        base = _int(rest[0], line, field)
        scale = _int(rest[1], line, field) if len(rest) == 2 else 1
        return IndexSequence.geom(base, scale, label=label)
    if kind == "explicit":
        if not rest:
            raise ScenarioError("explicit needs at least one value", line, field)
        return IndexSequence.explicit([_int(t, line, field) for t in rest], label=label)
    raise ScenarioError(f"unknown sequence kind {kind!r}", line, field)


def _build_target(value: str, line: int, field: str):
    toks = value.split()
    kind, rest = toks[0], toks[1:]
    if kind == "poly":
        if not rest:
            raise ScenarioError("poly needs at least one coefficient", line, field)
        return ComplexPolynomial(0.0, [_complex(t, line, field) for t in rest])
    if kind == "const":
        _arity(rest, 1, line, field)
        return ComplexPolynomial(0.0, [_complex(rest[0], line, field)])
    if kind == "recip":
        _arity(rest, 2, line, field)
        return RecipPower(_complex(rest[0], line, field), _int(rest[1], line, field))
    raise ScenarioError(f"unknown target kind {kind!r}", line, field)


# ---------------------------------------------------------------------------
# the scenario object


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: geometry, sequence family, targets, and tolerances.

    Sections a command does not use may be absent; the accessors raise
    ScenarioError naming what is missing.  `options` holds the raw entries of
    the subcommand sections as {section: {key: (line, value)}}.
    """

    name: str
    base_dir: str
    raw: str
    omega: DomainSpec | None
    sets: dict
    exhaustion_count: int
    u1: object | None
    u2: object | None
    family: SequenceFamily | None
    g: object | None
    targets: tuple  # ((sigma, set_name, expr), ...) by increasing sigma
    eps: float
    s: int
    trials: int
    horizon: int
    mesh: float | None
    levels: tuple
    theta0: float | None
    invariance_final: float
    options: dict

    # -- accessors ------------------------------------------------------------

    def require_domain(self) -> DomainSpec:
        if self.omega is None:
            raise ScenarioError("a [domain] section with omega and zeta0 is required", field="domain")
        return self.omega

    def require_family(self) -> SequenceFamily:
        if self.family is None:
            raise ScenarioError("a [sequences] section is required", field="sequences")
        return self.family

    def resolve_set(self, name: str, field: str = "set") -> CompactSetSample:
        if name in self.sets:
            return self.sets[name]
        m = re.fullmatch(r"E(\d+)", name)
        if m and self.exhaustion_count:
            k = int(m.group(1))
            if 1 <= k <= self.exhaustion_count:
                return make_exhaustion(self.require_domain(), k)
        raise ScenarioError(f"unknown set {name!r}", field=field)

    def target_pairs(self) -> tuple:
        if not self.targets:
            raise ScenarioError("a [targets] section with f1.. entries is required", field="targets")
        return tuple((expr, self.resolve_set(kname, field=f"targets.f{sig}"))
                     for sig, kname, expr in self.targets)

    def construction(self) -> ConstructionScenario:
        omega = self.require_domain()
        family = self.require_family()
        if self.g is None:
            raise ScenarioError("construction needs the base target g", field="targets.g")
        if "L" not in self.sets:
            raise ScenarioError("construction needs the center set L", field="sets.L")
        if self.u1 is None or self.u2 is None:
            raise ScenarioError("construction needs U1 and U2", field="neighborhoods")
        return ConstructionScenario(
            omega=omega,
            l_set=self.sets["L"],
            g=self.g,
            targets=self.target_pairs(),
            family=family,
            eps=self.eps,
            s=self.s,
            u1=self.u1,
            u2=self.u2,
        )

    # -- subcommand options ---------------------------------------------------

    def opt(self, section: str, key: str, default=None) -> tuple:
        """(line, raw value) for a subcommand entry, or (None, default)."""
        entry = self.options.get(section, {}).get(key)
        return entry if entry is not None else (None, default)

    def require_opt(self, section: str, key: str) -> tuple:
        line, value = self.opt(section, key)
        if value is None:
            raise ScenarioError(f"missing required entry {key!r}", field=f"{section}.{key}")
        return line, value

    def resolve_path(self, value: str) -> str:
        return value if os.path.isabs(value) else os.path.join(self.base_dir, value)


# ---------------------------------------------------------------------------
# parsing


def _read_entries(text: str):
    """{section: [(line, key, value), ...]} with syntax checked per line."""
    sections: dict = {}
    current = None
    for no, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError("unterminated section header", no)
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ScenarioError(f"unknown section {name!r}", no)
            if name in sections:
                raise ScenarioError(f"duplicate section {name!r}", no)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ScenarioError("entry before any section header", no)
        if "=" not in line:
            raise ScenarioError("expected 'key = value'", no, current)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ScenarioError("expected 'key = value'", no, current)
        if any(k == key for _, k, _ in sections[current]):
            raise ScenarioError(f"duplicate key {key!r}", no, f"{current}.{key}")
        sections[current].append((no, key, value))
    return sections


def _tolerances(entries):
    out = {
        "eps": 0.1,
        "s": 10,
        "trials": 16,
        "horizon": 64,
        "mesh": None,
        "levels": (2, 4, 8, 16, 32),
        "theta0": None,
        "invariance_final": 1e-3,
    }
    for no, key, value in entries:
        field = f"tolerances.{key}"
        if key == "eps":
            out["eps"] = _float(value, no, field)
        elif key == "s":
            out["s"] = _int(value, no, field)
        elif key == "trials":
            out["trials"] = _int(value, no, field)
        elif key == "horizon":
            out["horizon"] = _int(value, no, field)
        elif key == "mesh":
            out["mesh"] = _float(value, no, field)
        elif key == "levels":
            out["levels"] = tuple(_int(t, no, field) for t in value.split())
        elif key == "theta0":
            out["theta0"] = _float(value, no, field)
        elif key == "invariance_final":
            out["invariance_final"] = _float(value, no, field)
        else:
            raise ScenarioError(f"unknown tolerance {key!r}", no, field)
    return out


def parse_scenario(text: str, name: str = "scenario", base_dir: str = ".",
                   mesh: float | None = None) -> Scenario:
    """Parse scenario text; `mesh` (e.g. from --mesh) overrides the file's."""
    sections = _read_entries(text)
    tol = _tolerances(sections.get("tolerances", ()))
    if mesh is not None:
        tol["mesh"] = mesh

    omega = None
    if "domain" in sections:
        entries = {k: (no, v) for no, k, v in sections["domain"]}
        for no, key, _ in sections["domain"]:
            if key not in ("omega", "zeta0"):
                raise ScenarioError(f"unknown domain entry {key!r}", no, f"domain.{key}")
        if "zeta0" not in entries:
            raise ScenarioError("missing required field zeta0", field="domain.zeta0")
        if "omega" not in entries:
            raise ScenarioError("missing required field omega", field="domain.omega")
        zno, zval = entries["zeta0"]
        zeta0 = _complex(zval, zno, "domain.zeta0")
        ono, oval = entries["omega"]
        omega = _build_domain(oval, ono, "domain.omega", zeta0)

    sets: dict = {}
    exhaustion_count = 0
    for no, key, value in sections.get("sets", ()):
        field = f"sets.{key}"
        toks = value.split()
        if toks and toks[0] == "exhaustion":
            _arity(toks[1:], 1, no, field)
            count = _int(toks[1], no, field)
            if count < 1:
                raise ScenarioError("exhaustion count must be positive", no, field)
            exhaustion_count = count
            continue
        sets[key] = _build_set(value, no, field, tol["mesh"])

    u1 = u2 = None
    for no, key, value in sections.get("neighborhoods", ()):
        field = f"neighborhoods.{key}"
        if key == "U1":
            u1 = _build_region(value, no, field)
        elif key == "U2":
            u2 = _build_region(value, no, field)
        else:
            raise ScenarioError(f"unknown neighborhood {key!r} (use U1, U2)", no, field)
    if (u1 is None) != (u2 is None):
        raise ScenarioError("U1 and U2 must be given together", field="neighborhoods")

    family = None
    if "sequences" in sections:
        members = {}
        for no, key, value in sections["sequences"]:
            field = f"sequences.{key}"
            m = re.fullmatch(r"lambda(\d+)", key)
            if not m:
                raise ScenarioError(f"sequence keys are lambda1, lambda2, ... (got {key!r})", no, field)
            members[int(m.group(1))] = _build_sequence(value, no, field, key)
        expected = list(range(1, len(members) + 1))
        if sorted(members) != expected:
            raise ScenarioError(
                f"sequence indices must run 1..{len(members)} (got {sorted(members)})",
                field="sequences",
            )
        family = SequenceFamily(tuple(members[i] for i in expected))

    g = None
    targets = {}
    for no, key, value in sections.get("targets", ()):
        if key == "g":
            g = _build_target(value, no, "targets.g")
            continue
        m = re.fullmatch(r"f(\d+)\s+on\s+(\S+)", key)
        if not m:
            raise ScenarioError(
                f"target keys are 'g' or 'f<k> on <SET>' (got {key!r})", no, f"targets.{key}"
            )
        sigma, kname = int(m.group(1)), m.group(2)
        field = f"targets.f{sigma}"
        if sigma in targets:
            raise ScenarioError(f"duplicate target f{sigma}", no, field)
        if kname not in sets and not re.fullmatch(r"E\d+", kname):
            raise ScenarioError(f"target references unknown set {kname!r}", no, field)
        targets[sigma] = (kname, _build_target(value, no, field))
    if targets:
        expected = list(range(1, len(targets) + 1))
        if sorted(targets) != expected:
            raise ScenarioError(
                f"target indices must run 1..{len(targets)} (got {sorted(targets)})",
                field="targets",
            )
        if g is None:
            raise ScenarioError("targets need the base entry g", field="targets.g")
    target_rows = tuple((sig,) + targets[sig] for sig in sorted(targets))

    if family is not None and targets and len(targets) != family.sigma0:
        raise ScenarioError(
            f"one target per sequence: got {len(targets)} targets, {family.sigma0} sequences",
            field="targets",
        )

    options = {}
    for section in _COMMAND_KEYS:
        if section not in sections:
            continue
        allowed = _COMMAND_KEYS[section]
        table = {}
        for no, key, value in sections[section]:
            if key not in allowed:
                raise ScenarioError(
                    f"unknown entry {key!r} (allowed: {', '.join(allowed)})",
                    no,
                    f"{section}.{key}",
                )
            table[key] = (no, value)
        options[section] = table

    return Scenario(
        name=name,
        base_dir=base_dir,
        raw=text,
        omega=omega,
        sets=sets,
        exhaustion_count=exhaustion_count,
        u1=u1,
        u2=u2,
        family=family,
        g=g,
        targets=target_rows,
        eps=tol["eps"],
        s=tol["s"],
        trials=tol["trials"],
        horizon=tol["horizon"],
        mesh=tol["mesh"],
        levels=tol["levels"],
        theta0=tol["theta0"],
        invariance_final=tol["invariance_final"],
        options=options,
    )


def load_scenario(path: str, mesh: float | None = None) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario(
        text,
        name=os.path.basename(path),
        base_dir=os.path.dirname(os.path.abspath(path)),
        mesh=mesh,
    )


def with_overrides(scn: Scenario, horizon: int | None = None,
                   trials: int | None = None) -> Scenario:
    """Apply CLI-level overrides that do not affect parsing."""
    changes = {}
    if horizon is not None:
        changes["horizon"] = horizon
    if trials is not None:
        changes["trials"] = trials
    return dataclasses.replace(scn, **changes) if changes else scn

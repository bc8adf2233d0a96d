import os
from dataclasses import replace

from .internal import *
from .workspace import Log
from .common import Length, Grid, lengths_from_str
from .materials import MaterialModel, Oscillator, PRESETS

# Run configuration file:
#
#   # comment
#   material = gold          # preset name, or a [material] section below
#   length   = 1um
#   grid     = 0.1:20:400
#   [material]
#   omega0 = 5
#   omega_p = 8
#   gamma = 0.5
#   [mu]                     # optional Lorentz permeability
#   ...

reg_config_line = regex.compile(r'''
    ^[ \t]*+
    (?:
        \[ [ \t]*+ (?P<section>\w++) [ \t]*+ \] |
        (?P<key>\w++) [ \t]*+ = [ \t]*+ (?P<value>[^\#\n]*?)
    )?
    [ \t]*+ (?:\#[^\n]*+)? $''', re_flags | regex.RegexFlag.MULTILINE)

OutputFormat: TypeAlias = Literal["csv", "json"]

_TOP_KEYS = ("material", "length", "grid", "tol", "out", "format",
             "lengths", "omega", "xgrid", "cutoff")
_OSCILLATOR_KEYS = ("omega0", "omega_p", "gamma")
_SECTIONS = ("material", "mu")

@dataclass
class RunConfig:
    material: MaterialModel = PRESETS["gold"]
    length: Length = field(default_factory=lambda: Length(1.0, "um"))
    grid: Grid = field(default_factory=lambda: Grid(0.1, 20.0, 400))
    tolerance: float = 1e-4
    output: str | None = None   # None means stdout
    format: OutputFormat = "csv"
    lengths: list[Length] = field(default_factory=lambda: lengths_from_str("0.1um,1um,10um"))
    omega: float = 2.0
    xgrid: Grid = field(default_factory=lambda: Grid(-5.0, 15.0, 81))
    cutoff: float = 1e3

    def validate(self) -> 'RunConfig':
        if not self.length.inv_eV() > 0:
            raise ConfigError("length", f"must be > 0, got {self.length}")
        if self.grid.count < 2:
            raise ConfigError("grid", f"needs at least 2 points, got {self.grid.count}")
        if not 0 < self.grid.start < self.grid.stop:
            raise ConfigError("grid", f"must satisfy 0 < start < stop, got {self.grid}")
        if not self.tolerance > 0:
            raise ConfigError("tol", f"must be > 0, got {self.tolerance}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", f"must be csv or json, got '{self.format}'")
        if not self.lengths:
            raise ConfigError("lengths", "empty list")
        for length in self.lengths:
            if not length.inv_eV() > 0:
                raise ConfigError("lengths", f"must be > 0, got {length}")
        if not self.omega > 0:
            raise ConfigError("omega", f"must be > 0, got {self.omega}")
        if self.xgrid.count < 2 or not self.xgrid.start < self.xgrid.stop:
            raise ConfigError("xgrid", f"needs start < stop and at least 2 points, got {self.xgrid}")
        if not self.cutoff > 0:
            raise ConfigError("cutoff", f"must be > 0, got {self.cutoff}")
        return self

    # Only the Kramers-Kronig reconstruction integrates up to the cutoff.
    def validate_cutoff(self) -> 'RunConfig':
        if not self.cutoff > self.grid.stop:
            raise ConfigError("cutoff", f"must exceed the grid stop {self.grid.stop:g}, got {self.cutoff}")
        return self

    def asDict(self) -> dict[str, Any]:
        return {"material": self.material.asDict(),
                "length": str(self.length), "length_inv_eV": self.length.inv_eV(),
                "grid": str(self.grid), "tol": self.tolerance,
                "out": self.output, "format": self.format,
                "lengths": [str(l) for l in self.lengths],
                "omega": self.omega, "xgrid": str(self.xgrid), "cutoff": self.cutoff}

    @staticmethod
    def fromText(txt: str, base: 'RunConfig | None' = None, where: str = "<config>") -> 'RunConfig':
        sections = parse_sections(txt, where)
        top = sections.get("", {})
        for key in top:
            if key not in _TOP_KEYS:
                raise ConfigError(key, f"unknown key in {where}")
        ret = replace(base) if base is not None else RunConfig()
        if "material" in top:
            ret.material = MaterialModel.fromPreset(top["material"])
        if "material" in sections or "mu" in sections:
            ret.material = material_from_sections(sections, ret.material)
        for key, value in top.items():
            Log.config(f"{where}:", f"{key} = {value}")
            try:
                _apply(ret, key, value)
            except ConfigError:
                raise
            except ValueError as e:
                raise ConfigError(key, str(e)) from e
        return ret.validate()

    @staticmethod
    def fromFile(path: str, base: 'RunConfig | None' = None) -> 'RunConfig':
        with open(path) as f:
            return RunConfig.fromText(f.read(), base, path)

def _apply(cfg: RunConfig, key: str, value: str) -> None:
    match key:
        case "material":
            pass
        case "length":
            cfg.length = Length.fromStr(value)
        case "grid":
            cfg.grid = Grid.fromStr(value)
        case "tol":
            cfg.tolerance = float(value)
        case "out":
            cfg.output = value or None
        case "format":
            cfg.format = cast(OutputFormat, value)
        case "lengths":
            cfg.lengths = lengths_from_str(value)
        case "omega":
            cfg.omega = float(value)
        case "xgrid":
            cfg.xgrid = Grid.fromStr(value)
        case "cutoff":
            cfg.cutoff = float(value)

# {section name: {key: value}}; top-level keys go under "".
def parse_sections(txt: str, where: str = "<config>") -> dict[str, dict[str, str]]:
    ret: dict[str, dict[str, str]] = {"": {}}
    section = ""
    for lineno, line in enumerate(txt.splitlines(), 1):
        match = reg_config_line.match(line)
        if not match:
            raise ConfigError(f"{where}:{lineno}", f"cannot parse line '{line.strip()}'")
        if match["section"]:
            section = match["section"]
            if section not in _SECTIONS:
                raise ConfigError(section, f"unknown section in {where}")
            ret.setdefault(section, {})
        elif match["key"]:
            if match["key"] in ret[section]:
                raise ConfigError(match["key"], f"duplicate key in {where}")
            ret[section][match["key"]] = match["value"].strip()
    return ret

def _oscillator(section: str, values: dict[str, str], base: Oscillator | None) -> Oscillator:
    for key in values:
        if key not in _OSCILLATOR_KEYS:
            raise ConfigError(f"{section}.{key}", "unknown key")
    parsed: dict[str, float] = {}
    for key in _OSCILLATOR_KEYS:
        if key in values:
            try:
                parsed[key] = float(values[key])
            except ValueError:
                raise ConfigError(f"{section}.{key}", f"not a number: '{values[key]}'") from None
        elif base is not None:
            parsed[key] = getattr(base, key)
        else:
            raise ConfigError(f"{section}.{key}", "missing")
    ret = Oscillator(**parsed)
    ret.validate(section)
    return ret

def material_from_sections(sections: dict[str, dict[str, str]],
                           base: MaterialModel | None = None) -> MaterialModel:
    eps = _oscillator("material", sections["material"],
                      base.eps_oscillator() if base is not None else None) \
          if "material" in sections else (base.eps_oscillator() if base is not None else None)
    if eps is None:
        raise ConfigError("material", "no [material] section")
    mu = _oscillator("mu", sections["mu"], None) if "mu" in sections else \
         (base.mu_model if base is not None else None)
    return MaterialModel(eps.omega0, eps.omega_p, eps.gamma, mu_model=mu,
                         name=base.name if base is not None and "material" not in sections else "custom")

# `--material` argument: a preset name or a file with [material]/[mu] sections.
def material_from_arg(arg: str) -> MaterialModel:
    if arg in PRESETS:
        return PRESETS[arg]
    if not os.path.isfile(arg):
        raise ConfigError("material", f"'{arg}' is neither a preset ({', '.join(PRESETS)}) nor a file")
    with open(arg) as f:
        sections = parse_sections(f.read(), arg)
    if sections[""]:
        raise ConfigError(next(iter(sections[""])), f"unexpected top-level key in material file {arg}")
    return material_from_sections(sections)

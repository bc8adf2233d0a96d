from .internal import *

# 1 um in natural units (eV^-1).
UM_IN_INV_EV = 5.068

LengthUnit: TypeAlias = Literal["um", "inv_eV"]

re_number = r'''[-+]?(?:\d++\.?\d*+|\.\d++)(?:[eE][-+]?\d++)?'''

reg_length = regex.compile(r'''^\s*+(?P<v>''' + re_number + r''')\s*+
                               (?P<u>um|μm|inv_eV|eV\^?-1|1/eV)?\s*+$''', re_flags)
reg_grid = regex.compile(r'''^\s*+(?P<a>''' + re_number + r''')\s*+:
                             \s*+(?P<b>''' + re_number + r''')\s*+:
                             \s*+(?P<n>\d++)\s*+$''', re_flags)

@dataclass
class Length:
    value: float
    unit: LengthUnit = "inv_eV"

    def inv_eV(self) -> float:
        return self.value * UM_IN_INV_EV if self.unit == "um" else self.value

    def um(self) -> float:
        return self.value if self.unit == "um" else self.value / UM_IN_INV_EV

    def __str__(self) -> str:
        return f"{self.value:g}{self.unit}"

    @staticmethod
    def fromStr(txt: str) -> 'Length':
        match = reg_length.match(txt)
        if not match:
            raise ValueError(f"Invalid length '{txt}', expected <value><um|inv_eV>")
        unit: LengthUnit = "um" if match["u"] in ("um", "μm") else "inv_eV"
        return Length(float(match["v"]), unit)

@dataclass
class Grid:
    start: float
    stop: float
    count: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def __str__(self) -> str:
        return f"{self.start:g}:{self.stop:g}:{self.count}"

    @staticmethod
    def fromStr(txt: str) -> 'Grid':
        match = reg_grid.match(txt)
        if not match:
            raise ValueError(f"Invalid grid '{txt}', expected <start:stop:count>")
        return Grid(float(match["a"]), float(match["b"]), int(match["n"]))

# Comma separated list of lengths, e.g. "0.1um,1um,10um".
def lengths_from_str(txt: str) -> list[Length]:
    return [Length.fromStr(part) for part in regex.split(r"\s*+,\s*+", txt.strip()) if part]

# Format output by columns
def format_columns(rows: list[tuple]) -> list[str]:
    str_rows = [[str(cell) for cell in row] for row in rows]
    format_str = " ".join(["{:<" + str(max(len(cell) for cell in col)) + "}" for col in zip(*str_rows)])
    return ["  " + format_str.format(*row).strip() for row in str_rows]

def print_columns(rows: list[tuple], file=None):
    print(*format_columns(rows), sep="\n", file=file)

import enum
import sys
from dataclasses import dataclass
from typing import Callable, IO
from io import StringIO

from .internal import *

# Process-wide run state: log settings and the error counter.

# Default for library calls that can fan out over processes.
multithread: bool = False

class LogLevel(enum.IntEnum):
    QUIET   = 0
    FATAL   = 1
    ERROR   = DEFAULT = 2
    WARNING = 3
    INFO    = 4
    DEBUG   = DEBUG1 = 5
    DEBUG2  = 6
    DEBUG3  = 7
    DEBUG4  = 8
    DEBUG5  = 9

@dataclass
class LogCategory:
    name: str
    level: LogLevel
    enabled: bool

    def __call__(self, *args, **kwargs) -> bool:
        return LOG(self, *args, **kwargs)

class Log: # Log Categories
    quad_budget     = LogCategory("quad_budget",     LogLevel.ERROR,   True)
    quad_tail       = LogCategory("quad_tail",       LogLevel.WARNING, True)
    quad_inexact    = LogCategory("quad_inexact",    LogLevel.WARNING, True)
    quad_refine     = LogCategory("quad_refine",     LogLevel.DEBUG2,  True)
    residual_coarse = LogCategory("residual_coarse", LogLevel.WARNING, True)
    kk_refine       = LogCategory("kk_refine",       LogLevel.WARNING, True)
    verify_check    = LogCategory("verify_check",    LogLevel.INFO,    True)
    row_failed      = LogCategory("row_failed",      LogLevel.ERROR,   True)
    scan            = LogCategory("scan",            LogLevel.DEBUG,   True)
    config          = LogCategory("config",          LogLevel.DEBUG3,  True)

logLevel = LogLevel.DEFAULT
logStream: IO | None = None
errors: int = 0

# Captures records and counts the errors logged inside the scope, so a pool
# worker can hand both back to the parent process.
class LogToStringScope:
    def __init__(self):
        self.oldStream = logStream
        self.stream = StringIO()
        self.errors = 0
        self._errorsBefore = 0

    def __enter__(self) -> 'LogToStringScope':
        global logStream
        logStream = self.stream
        self._errorsBefore = errors
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        global logStream
        logStream = self.oldStream
        self.errors = errors - self._errorsBefore

    def getvalue(self) -> str:
        return self.stream.getvalue()

def addErrors(count: int) -> None:
    global errors
    errors += count

def setLogLevel(level: LogLevel):
    global logLevel
    logLevel = level

def resetErrors() -> None:
    global errors
    errors = 0

# `location` names where the record comes from, e.g. "quadrature:[0.5, 1]:".
def LOG(what: LogLevel | LogCategory,
        location: str | Callable[[], str] | None,
        *args, **kwargs) -> bool:
    level, enabled, catname = ((what.level, what.enabled, (f"{{{what.name}}}", ))
                               if isinstance(what, LogCategory) else
                               (what, True, ()))
    if level <= LogLevel.ERROR:
        global errors
        errors += 1
    if level > logLevel or not enabled:
        return False
    if callable(location):
        location = location()
    elif location is None:
        location = "    "
    for i in range(len(args)):
        if callable(args[i]):
            args = tuple(arg() if callable(arg) else arg for arg in args)
            break
    print(location, f"{level.name.lower()}:", *args, *catname, **kwargs,
          file=logStream if logStream is not None else sys.stderr)
    return True

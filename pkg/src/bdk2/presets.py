"""Built-in split root data."""

from __future__ import annotations

import re

from .lattice import RootDatum


def _gl(n: int) -> RootDatum:
    simple = [tuple(int(k == i) - int(k == i + 1) for k in range(n)) for i in range(n - 1)]
    return RootDatum(n, simple, simple, f"GL{n}")


def _torus(n: int) -> RootDatum:
    return RootDatum(n, (), (), f"Gm^{n}")


_FIXED = {
    "SL2": lambda: RootDatum(1, [(2,)], [(1,)], "SL2"),
    "PGL2": lambda: RootDatum(1, [(1,)], [(2,)], "PGL2"),
    # coordinates on Y in the coroot basis
    "SL3": lambda: RootDatum(2, [(2, -1), (-1, 2)], [(1, 0), (0, 1)], "SL3"),
    "Sp4": lambda: RootDatum(2, [(1, -1), (0, 2)], [(1, -1), (0, 1)], "Sp4"),
}

PRESET_NAMES = ("SL2", "PGL2", "GL2", "GL3", "GL4", "SL3", "Sp4", "Gm^1", "Gm^2", "Gm^3", "Gm^4")


def preset(name: str) -> RootDatum:
    name = name.removeprefix("presets:")
    if name in _FIXED:
        return _FIXED[name]()
    m = re.fullmatch(r"GL(\d)", name)
    if m and 1 <= int(m.group(1)) <= 4:
        return _gl(int(m.group(1)))
    m = re.fullmatch(r"Gm\^?(\d)", name)
    if m and 1 <= int(m.group(1)) <= 4:
        return _torus(int(m.group(1)))
    raise KeyError(name)


def all_presets() -> list[RootDatum]:
    return [preset(n) for n in PRESET_NAMES]

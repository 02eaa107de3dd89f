# SPDX-License-Identifier: Apache-2.0
"""Finitary isomorphisms of finite-domain Poisson point patterns.

Thin Python veneer over the C++ core.  Point patterns cross the language
boundary as the exact-decimal CSV text the CLI uses, so bit-level round
trips survive the hop; helpers here parse that format into plain floats
for convenience.
"""

try:  # installed layout: extension lives inside the package
    from . import _ppiso as _core
except ImportError:  # build-tree layout: extension next to the build outputs
    import _ppiso as _core

__all__ = [
    "sample_poisson",
    "psi",
    "psi_inv",
    "phi",
    "selection_map",
    "desk_params",
    "paper_params",
    "prop24_bound",
    "parse_csv",
]

sample_poisson = _core.sample_poisson
psi = _core.psi
psi_inv = _core.psi_inv
phi = _core.phi
selection_map = _core.selection_map
desk_params = _core.desk_params
paper_params = _core.paper_params
prop24_bound = _core.prop24_bound


def parse_csv(text):
    """Parse pattern CSV into (header_dict, list of coordinate tuples).

    Coordinates come back as floats; use the CSV text itself whenever exact
    values matter.
    """
    header = {}
    points = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    k, v = tok.split("=", 1)
                    header[k] = v
            continue
        points.append(tuple(float(c) for c in line.split(",")))
    return header, points

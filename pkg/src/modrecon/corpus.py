"""Small benchmark ideals in the ideal-file text format."""
from __future__ import annotations

from .poly import Polynomial, Ring, parse_ideal

KATSURA2 = """\
ring: u0,u1,u2; order: lex; field: Q
u0 + 2*u1 + 2*u2 - 1
u0^2 + 2*u1^2 + 2*u2^2 - u0
2*u0*u1 + 2*u1*u2 - u1
"""

KATSURA3 = """\
ring: u0,u1,u2,u3; order: degrevlex; field: Q
u0 + 2*u1 + 2*u2 + 2*u3 - 1
u0^2 + 2*u1^2 + 2*u2^2 + 2*u3^2 - u0
2*u0*u1 + 2*u1*u2 + 2*u2*u3 - u1
u1^2 + 2*u0*u2 + 2*u1*u3 - u2
"""

CYCLIC3 = """\
ring: x,y,z; order: lex; field: Q
x + y + z
x*y + y*z + z*x
x*y*z - 1
"""

SYM2 = """\
ring: x,y; order: lex; field: Q
x + y
x - y
"""

# dense quadrics with coefficients drawn uniformly from [-9, 9] \ {0}
QUADRICS1 = """\
ring: x,y,z; order: degrevlex; field: Q
-5*x^2 + 9*x*y + 8*y^2 + 5*x*z + 9*y*z + z^2 + 6*x - 4*y - 6*z + 8
-2*x^2 + 8*x*y - y^2 - 8*x*z - 4*y*z - 8*z^2 - 9*x + 7*y + 3*z + 5
3*x^2 + 4*x*y + 6*y^2 - 6*x*z + 5*y*z + 5*z^2 + 3*x - 8*y + 8*z - 2
"""

QUADRICS2 = """\
ring: x,y,z; order: degrevlex; field: Q
-9*x^2 + 7*x*y - 2*y^2 + 9*x*z + 8*y*z + 2*z^2 - 5*x - 5*y - z + 8
9*x^2 - 5*x*y - 7*y^2 + 4*x*z + 6*y*z + 7*z^2 - 7*x + y - 5*z - 6
-4*x^2 + x*y + 2*y^2 - 6*x*z + 6*y*z + 3*z^2 - 8*x - 7*y + 2*z - 7
"""

QUADRICS3 = """\
ring: x,y,z; order: degrevlex; field: Q
3*x^2 - 7*x*y + 9*y^2 - 7*x*z + 4*y*z - 7*z^2 - 5*x + 5*y + 8*z - 6
-4*x^2 + x*y - 2*y^2 + 2*x*z + 2*y*z + 6*z^2 - 7*x - 5*y + 8*z + 6
2*x^2 - 3*x*y + 7*y^2 - 9*x*z + 6*y*z + 7*z^2 - 7*x + 4*y + 5*z - 8
"""

CORPUS = {
    "katsura2": KATSURA2,
    "katsura3": KATSURA3,
    "cyclic3": CYCLIC3,
    "sym2": SYM2,
    "quadrics1": QUADRICS1,
    "quadrics2": QUADRICS2,
    "quadrics3": QUADRICS3,
}


def load(name: str) -> tuple[Ring, list[Polynomial]]:
    return parse_ideal(CORPUS[name])

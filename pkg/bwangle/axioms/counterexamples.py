import numpy as np
import pandas as pd

from ..geometry import rho_angle
from ..space import hoelder

TOLERANCE = 1e-12


def reproduce_counterexamples() -> pd.DataFrame:
    """Recompute the 0-angles of `x = (1, 0)` and `y = (0, 1)` in the plane with the sum weight

    The 0-angle satisfies An1 to An7 there, but neither An8, An9 nor An10.

    Returns:
        A dataframe with columns `quantity`, `computed`, `expected`, `error` and `holds` (error within `1e-12`).
        The rows `An8`, `An9` and `An10` compare both sides of each property: their `holds` is `True`
        when the sides differ by the expected gap, i.e. when the property is violated as expected.
    """
    space = hoelder(1)
    x, y = np.array([1.0, 0.0]), np.array([0.0, 1.0])

    def angle(a, b) -> float:
        return rho_angle(space, a, b, 0).angle_rad

    quarter = np.arccos(3 / 4)
    rows = [
        ("angle(x, y)", angle(x, y), np.pi / 2),
        ("angle(x, x + y)", angle(x, x + y), quarter),
        ("angle(x + y, y)", angle(x + y, y), quarter),
        ("angle(-x, y - x)", angle(-x, y - x), quarter),
        ("angle(-y, x - y)", angle(-y, x - y), quarter),
        ("angle(y, y - x)", angle(y, y - x), quarter),
        ("angle(x, x - y)", angle(x, x - y), quarter),
        ("angle(-x, y)", angle(-x, y), np.pi / 2),
        ("An8: angle(x, x + y) + angle(x + y, y) - angle(x, y)", None, 2 * quarter - np.pi / 2),
        ("An9: angle(x, y) + angle(-x, y - x) + angle(-y, x - y) - pi", None, 2 * quarter - np.pi / 2),
        ("An10: angle(y, y - x) + angle(x, x - y) - angle(-x, y)", None, 2 * quarter - np.pi / 2),
    ]

    computed = {name: value for name, value, _ in rows if value is not None}
    sums = {
        "An8": computed["angle(x, x + y)"] + computed["angle(x + y, y)"] - computed["angle(x, y)"],
        "An9": computed["angle(x, y)"] + computed["angle(-x, y - x)"] + computed["angle(-y, x - y)"] - np.pi,
        "An10": computed["angle(y, y - x)"] + computed["angle(x, x - y)"] - computed["angle(-x, y)"],
    }

    table = pd.DataFrame(
        [
            {
                "quantity": name,
                "computed": value if value is not None else sums[name.split(":")[0]],
                "expected": expected,
            }
            for name, value, expected in rows
        ]
    )
    table["error"] = (table["computed"] - table["expected"]).abs()
    table["holds"] = table["error"] <= TOLERANCE
    return table

"""
Published reference values for the H2+ and H3++ bound tables (hartree, 4 decimals)
"""
from typing import Dict, List
import pandas as pd

TABLE1_COLUMNS = ['R', 'lb_j1', 'lb_j2', 'lb_j3', 'mu1_ub', 'mu1_lb']
TABLE2_COLUMNS = ['R', 'lb_j1', 'lb_j2', 'lb_j3', 'mu1_ub_lcao']
TABLE3_COLUMNS = ['R', 'mu2_lb', 'mu2_lb_sym']

# H2+: lower bounds for j = 1, 2, 3, variational upper bound, Temple lower bound
TABLE1 = [
    (0.2, -1.9807, -1.9779, -1.9771, -1.9285, -1.9294),
    (0.4, -1.9285, -1.9187, -1.9156, -1.8005, -1.8016),
    (0.6, -1.8554, -1.8363, -1.8303, -1.6712, -1.6722),
    (0.8, -1.7729, -1.7441, -1.7351, -1.5542, -1.5550),
    (1.0, -1.6898, -1.6520, -1.6404, -1.4515, -1.4522),
    (1.4, -1.5425, -1.4897, -1.4742, -1.2840, -1.2846),
    (1.8, -1.4328, -1.3674, -1.3487, -1.1556, -1.1565),
    (2.2, -1.3592, -1.2812, -1.2590, -1.0551, -1.0567),
    (2.6, -1.3129, -1.2219, -1.1958, -0.9751, -0.9779),
    (3.0, -1.2853, -1.1817, -1.1515, -0.9103, -0.9152),
    (4.0, -1.2576, -1.1313, -1.0934, -0.7941, -0.8084),
    (6.0, -1.2503, -1.1122, -1.0678, -0.6678, -0.7145),
]

# H3++ equilateral: lower bounds for j = 1, 2, 3 and an upper bound from an unstated trial function
TABLE2 = [
    (0.2, -4.3739, -4.3565, -4.3509, -4.1169),
    (0.4, -4.0662, -4.0104, -3.9928, -3.5919),
    (0.6, -3.6931, -3.5987, -3.5703, -3.1556),
    (0.8, -3.3359, -3.2135, -3.1786, -2.8094),
    (1.0, -3.0342, -2.8937, -2.8558, -2.5327),
    (1.4, -2.6238, -2.4521, -2.4089, -2.1215),
    (1.8, -2.4138, -2.1911, -2.1355, -1.8323),
    (2.2, -2.3177, -2.0310, -1.9575, -1.6183),
    (2.6, -2.2768, -1.9339, -1.8422, -1.4540),
    (3.0, -2.2603, -1.8798, -1.7735, -1.3243),
    (3.4, -2.2538, -1.8531, -1.7365, -1.2198),
    (3.8, -2.2514, -1.8412, -1.7172, -1.1342),
    (4.2, -2.2505, -1.8364, -1.7066, -1.0633),
]

# H2+ second eigenvalue, j = 2 window: unrestricted and restricted to D2h-invariant functions
TABLE3 = [
    (0.2, -0.5042, -0.4991),
    (0.4, -0.5199, -0.4964),
    (0.6, -0.5563, -0.4923),
    (0.8, -0.6181, -0.4869),
    (1.0, -0.6954, -0.4807),
    (1.4, -0.8465, -0.4674),
    (1.8, -0.9597, -0.4555),
    (2.2, -1.0318, -0.4469),
    (2.6, -1.0731, -0.4413),
    (3.0, -1.0947, -0.4373),
    (4.0, -1.1107, -0.4269),
    (6.0, -1.1114, -0.3971),
]

_TABLES = {1: (TABLE1, TABLE1_COLUMNS), 2: (TABLE2, TABLE2_COLUMNS), 3: (TABLE3, TABLE3_COLUMNS)}


def reference_table(number: int) -> pd.DataFrame:
    """Reference table as a DataFrame with the reproduction column names"""
    if number not in _TABLES:
        raise KeyError(f"No reference table {number}")
    rows, columns = _TABLES[number]
    return pd.DataFrame(rows, columns=columns)


def table_radii(number: int) -> List[float]:
    return [row[0] for row in _TABLES[number][0]]


def table_columns(number: int) -> List[str]:
    return list(_TABLES[number][1])


def reference_row(number: int, R: float) -> Dict[str, float]:
    """Reference values of one row, looked up by internuclear distance"""
    for row in _TABLES[number][0]:
        if abs(row[0] - R) < 1e-9:
            return dict(zip(_TABLES[number][1], row))
    raise KeyError(f"Table {number} has no row for R={R}")

"""Small univariate datasets with well-known outliers."""

# Hypothetical sample from Iglewicz & Hoaglin (1993).
IGLEWICZ = [2.1, 2.6, 2.4, 2.5, 2.3, 2.1, 2.3, 2.6, 8.2, 8.3]

# Daily temperatures (deg C) with two planted outliers.
TEMPERATURES = [
    12, 14, 14, 14, 17, 19, 19, 19, 19, 20, 21, 21, 21, 21,
    21, 22, 23, 24, 24, 24, 24, 26, 26, 30, 50, 55,
]

# The same readings padded with many more normal measurements.
TEMPERATURES_EXTENDED = [
    11, 11, 11, 11, 11, 11, 11, 11, 11, 11, 11, 11, 11, 11, 12, 12, 12, 12, 12, 12, 12,
    12, 12, 12, 13, 13, 14, 14, 14, 17, 19, 19, 19, 19, 20, 21, 21, 21, 21, 21, 22, 23,
    24, 24, 24, 24, 26, 26, 30, 50, 55,
]

# Blood lead concentrations of children of battery-plant workers, Iglewicz & Hoaglin (1993).
LEAD = [
    10, 13, 14, 15, 16, 17, 18, 20, 21, 22, 23, 23, 24, 25, 27, 31, 34, 34, 35, 35, 36,
    37, 38, 39, 39, 41, 43, 44, 45, 48, 49, 62, 73,
]

# Indicator stream cut into five windows of four.
INDICATOR_STREAM = [0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]

# Mixed-precision values used to illustrate integerization.
MIXED_PRECISION = [-0.1, -1.46, 1.2, 1.35, 2.678, 2.10293, 10]

UNIVARIATE = {
    "iglewicz": IGLEWICZ,
    "temperatures": TEMPERATURES,
    "temperatures-extended": TEMPERATURES_EXTENDED,
    "lead": LEAD,
}

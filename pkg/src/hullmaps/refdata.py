"""Built-in reference expansions of the perimeter-weighted series.

Hand-transcribed low-order counts used as ground truth by the series checker
and the brute-force enumeration tests: for each (family, d, k), a mapping
``{N: {L: count}}`` where ``count`` is the number of k-pointed-rooted maps
with ``N`` faces whose hull boundary at distance ``d`` has length ``L``.

Quadrangulation tables run to 8 faces, triangulation tables to 12.
"""

QUAD_TABLES = {
    (2, 3): {
        2: {2: 1},
        3: {2: 15},
        4: {4: 1, 2: 178},
        5: {4: 28, 2: 1967},
        6: {6: 1, 4: 518, 2: 21165},
        7: {6: 42, 4: 8018, 2: 225488},
        8: {8: 1, 6: 1075, 4: 112671, 2: 2395983},
    },
    (2, 4): {
        3: {2: 1},
        4: {2: 22},
        5: {4: 1, 2: 342},
        6: {4: 36, 2: 4640},
        7: {6: 1, 4: 815, 2: 58799},
        8: {6: 51, 4: 14914, 2: 716865},
    },
    (3, 4): {
        3: {2: 1},
        4: {2: 22},
        5: {4: 2, 2: 341},
        6: {4: 71, 2: 4605},
        7: {6: 3, 4: 1586, 2: 58026},
        8: {6: 150, 4: 28655, 2: 703025},
    },
    (2, 5): {
        4: {2: 1},
        5: {2: 29},
        6: {4: 1, 2: 555},
        7: {4: 43, 2: 8876},
        8: {6: 1, 4: 1127, 2: 128712},
    },
    (3, 5): {
        4: {2: 1},
        5: {2: 29},
        6: {4: 2, 2: 554},
        7: {4: 87, 2: 8832},
        8: {6: 3, 4: 2300, 2: 127537},
    },
    (4, 5): {
        4: {2: 1},
        5: {2: 29},
        6: {4: 2, 2: 554},
        7: {4: 86, 2: 8833},
        8: {6: 3, 4: 2251, 2: 127586},
    },
}

TRI_TABLES = {
    (1, 2): {
        2: {1: 1},
        4: {2: 1, 1: 14},
        6: {3: 1, 2: 26, 1: 199},
        8: {4: 1, 3: 39, 2: 533, 1: 2952},
        10: {5: 1, 4: 53, 3: 1062, 2: 10147, 1: 45473},
        12: {6: 1, 5: 68, 4: 1824, 3: 25040, 2: 187756, 1: 722498},
    },
    (1, 3): {
        4: {1: 1},
        6: {2: 1, 1: 28},
        8: {3: 1, 2: 42, 1: 612},
        10: {4: 1, 3: 57, 2: 1220, 1: 12326},
        12: {5: 1, 4: 73, 3: 2090, 2: 30456, 1: 239793},
    },
    (2, 3): {
        4: {1: 1},
        6: {2: 2, 1: 27},
        8: {3: 3, 2: 79, 1: 573},
        10: {4: 4, 3: 159, 2: 2178, 1: 11263},
        12: {5: 5, 4: 270, 3: 5479, 2: 51970, 1: 214689},
    },
    (1, 4): {
        6: {1: 1},
        8: {2: 1, 1: 42},
        10: {3: 1, 2: 56, 1: 1225},
        12: {4: 1, 3: 71, 2: 2031, 1: 30792},
    },
    (2, 4): {
        6: {1: 1},
        8: {2: 2, 1: 41},
        10: {3: 3, 2: 111, 1: 1168},
        12: {4: 4, 3: 213, 2: 3984, 1: 28694},
    },
    (3, 4): {
        6: {1: 1},
        8: {2: 2, 1: 41},
        10: {3: 3, 2: 108, 1: 1171},
        12: {4: 4, 3: 204, 2: 3791, 1: 28896},
    },
}

QUAD_ORDER = 8
TRI_ORDER = 12

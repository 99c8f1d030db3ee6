"""Reference values the pipeline output is checked against.

Counts per level 1..12; structures are block lists compared up to isomorphism.
"""

GOLDENS_VERSION = 1

STRUCTURES = (1, 2, 5, 11, 19, 34, 41, 31, 12, 4, 1, 1)
REALIZABLE = (1, 2, 5, 11, 19, 34, 40, 29, 11, 2, 0, 1)
ON_CUBIC = (1, 2, 5, 11, 18, 32, 34, 22, 6, 1, 0, 1)

LEVEL_2 = ("012, 345", "012, 034")
LEVEL_3 = ("012, 034, 056", "012, 034, 135", "012, 034, 156", "012, 034, 567", "012, 345, 678")

NOT_REALIZABLE = (
    "012, 034, 056, 135, 146, 236, 245",
    "012, 034, 056, 078, 135, 146, 236, 245",
    "012, 034, 056, 078, 135, 146, 237, 248, 368, 457",
)

# structure -> collinearities every realization acquires
FORCED = {
    "012, 034, 056, 137, 158, 248, 267, 368": ("457",),
    "012, 034, 056, 078, 135, 147, 168, 238, 246": ("257",),
    "012, 034, 056, 078, 135, 147, 168, 238, 246, 367": ("257", "458"),
    "012, 034, 056, 078, 135, 147, 168, 238, 246, 257, 367": ("458",),
}

# structure -> d with realizations over Q[sqrt d] but not over Q
EXTENSION_FIELDS = {
    "012, 034, 056, 135, 147, 246, 257, 367": -3,
    "012, 034, 056, 078, 135, 147, 168, 367, 458": -3,
    "012, 034, 056, 078, 135, 146, 237, 258, 368, 457": -1,
    "012, 034, 056, 078, 135, 147, 168, 238, 246, 257, 367, 458": -3,
}

# realizable structures whose points on an irreducible cubic gain collinearities
CUBIC_FORCES = {
    "012, 034, 156, 278, 357": ("468",),
    "012, 034, 056, 137, 158, 248": ("267",),
    "012, 034, 056, 078, 135, 147, 238": ("246",),
    "012, 034, 056, 135, 147, 238, 246": ("078",),
    "012, 034, 056, 137, 158, 248, 368": ("267", "457"),
    "012, 034, 056, 078, 135, 147, 168, 238": ("246", "257"),
    "012, 034, 056, 078, 135, 147, 238, 257": ("168", "246"),
    "012, 034, 056, 078, 135, 147, 168, 367, 458": ("246", "257", "238"),
    "012, 034, 056, 078, 135, 147, 168, 238, 367": ("246", "257", "458"),
}

# realizable structures with no irreducible cubic through their points
CUBIC_EXCLUDED = (
    "012, 034, 056, 137, 248, 578",
    "012, 034, 056, 135, 147, 238, 267",
    "012, 034, 056, 135, 147, 238, 678",
    "012, 034, 056, 137, 158, 248, 467",
    "012, 034, 056, 078, 135, 146, 367, 458",
    "012, 034, 056, 078, 135, 147, 238, 267",
    "012, 034, 056, 135, 146, 278, 367, 458",
    "012, 034, 056, 135, 147, 238, 246, 578",
    "012, 034, 056, 135, 147, 238, 267, 468",
    "012, 034, 056, 078, 135, 146, 237, 368, 457",
    "012, 034, 056, 078, 135, 147, 238, 257, 468",
    "012, 034, 056, 135, 147, 238, 267, 468, 578",
    "012, 034, 056, 078, 135, 146, 237, 258, 368, 457",
)

MOEBIUS_KANTOR = "012, 034, 056, 135, 147, 246, 257, 367"
HESSE = "012, 034, 056, 078, 135, 147, 168, 238, 246, 257, 367, 458"

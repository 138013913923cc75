"""Combinatorial tables for an oriented tetrahedron with vertices 0..3."""

# Face k is spanned by these vertices; it is the face opposite vertex 3 - k.
FACE_VERTICES = (
    (0, 1, 2),
    (0, 1, 3),
    (0, 2, 3),
    (1, 2, 3),
)

FACE_LABELS = ('012', '013', '023', '123')

EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

EDGE_LABELS = tuple(f'{a}{b}' for a, b in EDGE_PAIRS)

# Quad slot faced by each tetrahedron edge: {01|23}, {02|13}, {03|12}.
QUAD_SLOT_OF_EDGE = {
    (0, 1): 0, (2, 3): 0,
    (0, 2): 1, (1, 3): 1,
    (0, 3): 2, (1, 2): 2,
}

SLOT_LABELS = ('01|23', '02|13', '03|12')

QUADS_PER_TETRAHEDRON = 3

# Prime marks for the shape levels z, z', z''.
LEVEL_MARKS = ('', "'", "''")

FIXTURE_NAMES = ('table1', 'table2', 'phi0')


def face_opposite(vertex: int) -> int:
    return 3 - vertex


def vertex_opposite(face: int) -> int:
    return 3 - face


def quad_slot(a: int, b: int) -> int:
    return QUAD_SLOT_OF_EDGE[(min(a, b), max(a, b))]


def quad_index(tet: int, slot: int) -> int:
    return QUADS_PER_TETRAHEDRON * tet + slot


def permutation_parity(perm) -> int:
    """0 for even, 1 for odd."""
    inversions = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inversions += 1
    return inversions % 2

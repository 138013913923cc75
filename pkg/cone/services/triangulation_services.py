"""
Face-pairing tables and the combinatorial skeleton they induce: edge and
vertex classes, triangulated vertex links and the Euler-count identity
|T| - |E| + |V| = sum of link genera.
"""
import logging
import re
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import networkx as nx

from cone.constants import (
    EDGE_PAIRS,
    FACE_LABELS,
    FACE_VERTICES,
    face_opposite,
    permutation_parity,
    vertex_opposite,
)
from cone.exceptions import (
    InvalidEdge,
    NonOrientableLink,
    NotInvolutive,
    NotOrientable,
    ParseError,
    UnpairedFace,
)
from cone.models.triangulation_model import (
    CensusSummary,
    EdgeClass,
    FacePairing,
    LinkSurface,
    Triangulation,
    VertexClass,
)

logger = logging.getLogger(__name__)

CELL_PATTERN = re.compile(r'^(\d+)\s*\(\s*([0-3])\s*([0-3])\s*([0-3])\s*\)$')


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].strip()


def _parse_cell(cell: str, face: int, line_no: int) -> Optional[FacePairing]:
    if cell.strip() == '-':
        return None
    match = CELL_PATTERN.match(cell.strip())
    if not match:
        raise ParseError(f"Cannot read face {FACE_LABELS[face]} entry '{cell.strip()}'", line=line_no)
    target_tet = int(match.group(1))
    images = tuple(int(d) for d in match.groups()[1:])
    if len(set(images)) != 3:
        raise ParseError(f"Repeated vertex in permutation digits '{cell.strip()}'", line=line_no)

    perm = [0, 0, 0, 0]
    for src, dst in zip(FACE_VERTICES[face], images):
        perm[src] = dst
    off_target = ({0, 1, 2, 3} - set(images)).pop()
    perm[vertex_opposite(face)] = off_target
    return FacePairing(target_tet=target_tet, target_face=face_opposite(off_target), perm=tuple(perm))


def parse_pairing_rows(text: str) -> Dict[int, Tuple[FacePairing, ...]]:
    """Read the raw rows of a face-pairing table without global checks."""
    rows = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        cells = [cell.strip() for cell in line.split('|')]
        if cells and cells[-1] == '':
            cells = cells[:-1]
        if len(cells) != 5:
            raise ParseError(f"Expected 5 columns, found {len(cells)}", line=line_no)
        if not cells[0].isdigit():
            raise ParseError(f"Bad tetrahedron index '{cells[0]}'", line=line_no)
        tet = int(cells[0])
        if tet in rows:
            raise ParseError(f"Tetrahedron {tet} listed twice", line=line_no)
        rows[tet] = tuple(_parse_cell(cell, face, line_no) for face, cell in enumerate(cells[1:]))
    return rows


def find_invalid_edge(pairings) -> Optional[Tuple[int, Tuple[int, int]]]:
    """First oriented edge whose orbit contains its own reversal, or None."""
    seen = set()
    for tet in range(len(pairings)):
        for a, b in EDGE_PAIRS:
            if (tet, (a, b)) in seen:
                continue
            orbit = _edge_orbit(pairings, tet, (a, b))
            members = set(orbit)
            for member_tet, (x, y) in orbit:
                if (member_tet, (y, x)) in members:
                    return tet, (a, b)
            seen.update((m_tet, (min(x, y), max(x, y))) for m_tet, (x, y) in orbit)
    return None


def build_triangulation(pairings) -> Triangulation:
    """Validate pairing rows and freeze them into a Triangulation."""
    tet_count = len(pairings)
    for tet in range(tet_count):
        for face in range(4):
            pairing = pairings[tet][face]
            if pairing is None:
                raise UnpairedFace(f"Face {FACE_LABELS[face]} of tetrahedron {tet} is not paired",
                                   face=(tet, face))
            if not 0 <= pairing.target_tet < tet_count:
                raise UnpairedFace(
                    f"Face {FACE_LABELS[face]} of tetrahedron {tet} points to missing tetrahedron "
                    f"{pairing.target_tet}",
                    face=(tet, face),
                )
            back = pairings[pairing.target_tet][pairing.target_face]
            if back is None or back.target_tet != tet or back.target_face != face or back.perm != pairing.inverse_perm():
                raise NotInvolutive(
                    f"Face {FACE_LABELS[face]} of tetrahedron {tet} is not paired back by "
                    f"face {FACE_LABELS[pairing.target_face]} of tetrahedron {pairing.target_tet}",
                    face=(tet, face),
                )
            if permutation_parity(pairing.perm) != 1:
                raise NotOrientable(
                    f"Face {FACE_LABELS[face]} of tetrahedron {tet} is glued by an even permutation",
                    face=(tet, face),
                )

    invalid = find_invalid_edge(pairings)
    if invalid is not None:
        tet, (a, b) = invalid
        raise InvalidEdge(f"Edge {a}{b} of tetrahedron {tet} is identified with its reverse",
                          edge=(tet, a, b))

    return Triangulation(tet_count=tet_count, pairings=tuple(tuple(row) for row in pairings))


def parse_triangulation(text: str) -> Triangulation:
    """Parse a face-pairing table in the `i | t0 (abc) | ... | t3 (abc)` format."""
    if text is None or not text.strip():
        raise ParseError("Empty face-pairing table")

    rows = parse_pairing_rows(text)
    if not rows:
        raise ParseError("No tetrahedra found")
    tet_count = len(rows)
    if sorted(rows) != list(range(tet_count)):
        missing = sorted(set(range(tet_count)) - set(rows))
        raise ParseError(f"Tetrahedra must be numbered 0..{tet_count - 1}; missing {missing}")

    triangulation = build_triangulation([rows[tet] for tet in range(tet_count)])
    logger.info(f"Parsed triangulation with {tet_count} tetrahedra")
    return triangulation


def serialize_triangulation(t: Triangulation) -> str:
    lines = ['# tet | face 012 | face 013 | face 023 | face 123']
    for tet in range(t.tet_count):
        cells = [f'{p.target_tet} ({p.digits})' for p in t.pairings[tet]]
        lines.append(f'{tet} | ' + ' | '.join(cells))
    return '\n'.join(lines) + '\n'


def triangulation_to_dict(t: Triangulation) -> dict:
    return {
        'tet_count': t.tet_count,
        'pairings': [
            [{'face': FACE_LABELS[face], 'target_tet': p.target_tet, 'digits': p.digits}
             for face, p in enumerate(row)]
            for row in t.pairings
        ],
    }


def is_connected(t: Triangulation) -> bool:
    graph = nx.Graph()
    graph.add_nodes_from(range(t.tet_count))
    for tet, row in enumerate(t.pairings):
        for pairing in row:
            graph.add_edge(tet, pairing.target_tet)
    return t.tet_count > 0 and nx.is_connected(graph)


# Orbits

def _faces_containing(a: int, b: int) -> Tuple[int, int]:
    others = [v for v in range(4) if v not in (a, b)]
    return face_opposite(others[0]), face_opposite(others[1])


def _edge_orbit(pairings, tet: int, edge: Tuple[int, int]) -> List[Tuple[int, Tuple[int, int]]]:
    orbit = [(tet, edge)]
    seen = {(tet, edge)}
    stack = [(tet, edge)]
    while stack:
        current_tet, (a, b) = stack.pop()
        for face in _faces_containing(a, b):
            pairing = pairings[current_tet][face]
            image = (pairing.target_tet, (pairing.perm[a], pairing.perm[b]))
            if image not in seen:
                seen.add(image)
                orbit.append(image)
                stack.append(image)
    return orbit


def _corner_orbit(t: Triangulation, tet: int, vertex: int) -> List[Tuple[int, int]]:
    orbit = [(tet, vertex)]
    seen = {(tet, vertex)}
    stack = [(tet, vertex)]
    while stack:
        current_tet, v = stack.pop()
        for face in range(4):
            if face == face_opposite(v):
                continue
            pairing = t.glue(current_tet, face)
            image = (pairing.target_tet, pairing.perm[v])
            if image not in seen:
                seen.add(image)
                orbit.append(image)
                stack.append(image)
    return orbit


@lru_cache(maxsize=128)
def corner_class_index(t: Triangulation) -> Dict[Tuple[int, int], int]:
    """Vertex class of every corner (tet, vertex), numbered by first appearance."""
    index = {}
    label = 0
    for tet in range(t.tet_count):
        for vertex in range(4):
            if (tet, vertex) in index:
                continue
            for corner in _corner_orbit(t, tet, vertex):
                index[corner] = label
            label += 1
    return index


@lru_cache(maxsize=128)
def edge_classes(t: Triangulation) -> Tuple[EdgeClass, ...]:
    """Edge classes in order of first appearance over tets and edges 01, 02, 03, 12, 13, 23."""
    corners = corner_class_index(t)
    assigned = set()
    classes = []
    for tet in range(t.tet_count):
        for edge in EDGE_PAIRS:
            if (tet, edge) in assigned:
                continue
            orbit = _edge_orbit(t.pairings, tet, edge)
            members = []
            for member_tet, (a, b) in orbit:
                assigned.add((member_tet, (min(a, b), max(a, b))))
                members.append((member_tet, (a, b)))
            endpoints = (corners[(tet, edge[0])], corners[(tet, edge[1])])
            classes.append(EdgeClass(index=len(classes), members=tuple(members), endpoints=endpoints))
    return tuple(classes)


def edge_class_of(t: Triangulation) -> Dict[Tuple[int, Tuple[int, int]], int]:
    """Map (tet, sorted vertex pair) to its edge class index."""
    lookup = {}
    for edge in edge_classes(t):
        for tet, (a, b) in edge.members:
            lookup[(tet, (min(a, b), max(a, b)))] = edge.index
    return lookup


# Links

def link_ccw(vertex: int, a: int, b: int, c: int, orientation: int = 1) -> bool:
    """Whether corners (a, b, c) run anticlockwise in the link triangle at ``vertex``.

    Link triangles carry the boundary orientation of the truncated
    tetrahedron; for vertex order 0123 positive this is the case exactly
    when (vertex, a, b, c) is an odd permutation.
    """
    odd = permutation_parity((vertex, a, b, c)) == 1
    return odd if orientation == 1 else not odd


def link_corner_order(vertex: int, orientation: int = 1) -> Tuple[int, int, int]:
    """Corners of the link triangle at ``vertex`` in anticlockwise order."""
    a, b, c = [w for w in range(4) if w != vertex]
    return (a, b, c) if link_ccw(vertex, a, b, c, orientation) else (a, c, b)


def _build_link(t: Triangulation, label: int, members: List[Tuple[int, int]],
                edge_ends: int) -> LinkSurface:
    gluings = []
    for tet, v in members:
        a, b, c = link_corner_order(v)
        for face in range(4):
            if face == face_opposite(v):
                continue
            pairing = t.glue(tet, face)
            image = (pairing.target_tet, pairing.perm[v], pairing.target_face)
            gluings.append(((tet, v, face), image))

            # The side from p to q runs anticlockwise in this triangle; its
            # image must run clockwise in the partner triangle.
            p, q = [w for w in (a, b, c, a) if w != v and w != vertex_opposite(face)][:2]
            ordered = (a, b, c)
            if (ordered.index(q) - ordered.index(p)) % 3 != 1:
                p, q = q, p
            target_order = link_corner_order(image[1])
            step = (target_order.index(pairing.perm[q]) - target_order.index(pairing.perm[p])) % 3
            if step != 2:
                raise NonOrientableLink(
                    f"Side of link triangle ({tet}, {v}) in face {FACE_LABELS[face]} is glued "
                    f"without reversing direction",
                    vertex_class=label,
                )

    triangle_count = len(members)
    euler = edge_ends - triangle_count // 2
    return LinkSurface(
        triangles=tuple(members),
        side_gluings=tuple(gluings),
        vertex_count=edge_ends,
        euler_characteristic=euler,
    )


@lru_cache(maxsize=128)
def vertex_classes(t: Triangulation) -> Tuple[VertexClass, ...]:
    """Vertex classes with their triangulated links, χ and genus."""
    corners = corner_class_index(t)
    grouped: Dict[int, List[Tuple[int, int]]] = {}
    for tet in range(t.tet_count):
        for vertex in range(4):
            grouped.setdefault(corners[(tet, vertex)], []).append((tet, vertex))

    ends = {label: 0 for label in grouped}
    for edge in edge_classes(t):
        for endpoint in edge.endpoints:
            ends[endpoint] += 1

    classes = []
    for label in sorted(grouped):
        link = _build_link(t, label, grouped[label], ends[label])
        if link.euler_characteristic % 2 or link.euler_characteristic > 2:
            raise NonOrientableLink(
                f"Link of vertex class {label} has Euler characteristic {link.euler_characteristic}",
                vertex_class=label,
            )
        classes.append(VertexClass(index=label, members=tuple(grouped[label]), link=link))
    return tuple(classes)


def census_summary(t: Triangulation) -> CensusSummary:
    edges = edge_classes(t)
    vertices = vertex_classes(t)
    genera = tuple(v.genus for v in vertices)
    lemma_ok = t.tet_count - len(edges) + len(vertices) == sum(genera)
    if not lemma_ok:
        logger.error(
            f"Euler-count identity fails: |T|={t.tet_count} |E|={len(edges)} |V|={len(vertices)} "
            f"genera={list(genera)}"
        )
    return CensusSummary(
        tet_count=t.tet_count,
        edge_count=len(edges),
        vertex_count=len(vertices),
        genera=genera,
        lemma_ok=lemma_ok,
        edge_valences=tuple(e.valence for e in edges),
    )

"""Flat-sheet mesh, triangle addressing, and exact 2D transform math.

The sheet is a 4x4 grid of square cells, each split into two triangles
(32 triangles total).  Cell (row, col) splits along its TL-BR diagonal
when row+col is even and along its TR-BL diagonal when odd; this is the
unique assignment (given that cell (0,0) splits TL-BR) under which the
sheet midlines, both sheet diagonals, both diagonals of every half and
quarter region, and every legal fold reflection map the triangle mesh
onto itself.

Coordinates: origin at the top-left corner, x to the right, y downward.
All engine math uses integers at ``SCALE`` units per cell, which makes
every vertex, triangle centroid, and legal crease offset exactly
representable.  Orientations are degrees counterclockwise from the
viewer's point of view (so 90 deg points up on screen).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

# Units per cell; divisible by 4 (quarter-cell lattice) and 3 (centroids).
SCALE = 12
GRID = 4
SIDE = GRID * SCALE
CENTER = (SIDE // 2, SIDE // 2)

ORIENTATIONS = (0, 90, 180, 270)

Point = tuple[int, int]


class InputError(ValueError):
    """Raised for out-of-range triangle references or malformed inputs."""


class TriRef(NamedTuple):
    """Triangle address: grid row/col plus which of the cell's two triangles.

    tri=0 is the triangle containing the cell's full left edge, tri=1 the
    one containing the right edge.
    """

    row: int
    col: int
    tri: int

    def validate(self) -> "TriRef":
        if not (0 <= self.row < GRID and 0 <= self.col < GRID and self.tri in (0, 1)):
            raise InputError(f"triangle reference out of range: {tuple(self)}")
        return self


def tri_index(ref: TriRef) -> int:
    """Position index 1..32 for a triangle reference (row-major, left first)."""
    ref = TriRef(*ref).validate()
    return 8 * ref.row + 2 * ref.col + ref.tri + 1


def index_tri(value: int) -> TriRef:
    """Inverse of tri_index."""
    if not 1 <= value <= 32:
        raise InputError(f"position index out of range: {value}")
    v = value - 1
    return TriRef(v // 8, (v % 8) // 2, v % 2)


def tri_id(ref: TriRef) -> int:
    """Internal 0-based triangle id (== tri_index - 1)."""
    return tri_index(ref) - 1


def id_tri(tid: int) -> TriRef:
    return index_tri(tid + 1)


def split_is_main(row: int, col: int) -> bool:
    """True when cell (row, col) splits along its TL-BR diagonal."""
    return (row + col) % 2 == 0


def _build_triangles() -> tuple[tuple[tuple[Point, Point, Point], ...], tuple[Point, ...]]:
    verts: list[tuple[Point, Point, Point]] = []
    cents: list[Point] = []
    for tid in range(32):
        r, c, t = id_tri(tid)
        x0, y0 = c * SCALE, r * SCALE
        tl, tr = (x0, y0), (x0 + SCALE, y0)
        bl, br = (x0, y0 + SCALE), (x0 + SCALE, y0 + SCALE)
        if split_is_main(r, c):
            tri = (tl, bl, br) if t == 0 else (tl, tr, br)
        else:
            tri = (tl, tr, bl) if t == 0 else (tr, br, bl)
        verts.append(tri)
        cents.append(
            (
                (tri[0][0] + tri[1][0] + tri[2][0]) // 3,
                (tri[0][1] + tri[1][1] + tri[2][1]) // 3,
            )
        )
    return tuple(verts), tuple(cents)


#: Per-triangle vertices / centroids in scaled units, indexed by triangle id.
TRI_VERTICES, TRI_CENTROIDS = _build_triangles()


def triangle_vertices(ref: TriRef) -> tuple[tuple[int, int], ...]:
    """Vertices of a triangle in cell units (integers)."""
    sv = TRI_VERTICES[tri_id(ref)]
    return tuple((x // SCALE, y // SCALE) for x, y in sv)


def triangle_centroid(ref: TriRef) -> tuple[Fraction, Fraction]:
    """Centroid of a triangle in cell units (exact rationals)."""
    cx, cy = TRI_CENTROIDS[tri_id(ref)]
    return Fraction(cx, SCALE), Fraction(cy, SCALE)


def triangle_at_or_none(x: int, y: int) -> int | None:
    """triangle_at for points that may lie outside the display square.

    Folding an overhanging flap can move paper beyond the sheet outline;
    such parts have no display address and are skipped by the codecs.
    """
    if not (0 < x < SIDE and 0 < y < SIDE):
        return None
    return triangle_at(x, y)


def triangle_at(x: int, y: int) -> int:
    """Triangle id containing a point strictly inside one mesh triangle.

    Intended for transported centroids; points on mesh edges are rejected.
    """
    if not (0 < x < SIDE and 0 < y < SIDE):
        raise InputError(f"point outside sheet: ({x}, {y})")
    c, r = x // SCALE, y // SCALE
    lx, ly = x - c * SCALE, y - r * SCALE
    if split_is_main(r, c):
        if lx == ly:
            raise InputError(f"point on mesh edge: ({x}, {y})")
        t = 0 if ly > lx else 1
    else:
        if lx + ly == SCALE:
            raise InputError(f"point on mesh edge: ({x}, {y})")
        t = 0 if lx + ly < SCALE else 1
    return tri_id(TriRef(r, c, t))


# --- crease lines -----------------------------------------------------------

# kind -> (a, b) of the line equation a*x + b*y == c
_LINE_COEFFS = {"h": (0, 1), "v": (1, 0), "main": (-1, 1), "anti": (1, 1)}
# kind -> crease angle in viewer-CCW degrees
_LINE_ANGLE = {"h": 0, "anti": 45, "v": 90, "main": 135}
_ANGLE_LINE = {v: k for k, v in _LINE_ANGLE.items()}


@dataclass(frozen=True)
class CreaseLine:
    """An infinite fold line: horizontal, vertical, or one of the two diagonals.

    ``main`` runs TL-BR (y - x == c), ``anti`` runs TR-BL (x + y == c).
    Offsets are in scaled units.
    """

    kind: str
    c: int

    def __post_init__(self) -> None:
        if self.kind not in _LINE_COEFFS:
            raise InputError(f"unknown crease kind: {self.kind}")

    @property
    def angle_deg(self) -> int:
        return _LINE_ANGLE[self.kind]

    @property
    def on_mesh(self) -> bool:
        """True when reflecting across this line maps the mesh onto itself."""
        return self.c % SCALE == 0

    def side(self, p: Point) -> int:
        """Sign of the point relative to the line (-1, 0, +1)."""
        a, b = _LINE_COEFFS[self.kind]
        v = a * p[0] + b * p[1] - self.c
        return (v > 0) - (v < 0)

    def reflection(self) -> "Transform":
        c = self.c
        if self.kind == "h":
            return Transform(1, 0, 0, -1, 0, 2 * c)
        if self.kind == "v":
            return Transform(-1, 0, 0, 1, 2 * c, 0)
        if self.kind == "main":  # y = x + c  =>  (x, y) -> (y - c, x + c)
            return Transform(0, 1, 1, 0, -c, c)
        return Transform(0, -1, -1, 0, c, c)  # anti: (x, y) -> (c - y, c - x)

    @staticmethod
    def from_angle(angle_deg: int, c: int) -> "CreaseLine":
        if angle_deg not in _ANGLE_LINE:
            raise InputError(f"crease angle must be one of 0/45/90/135: {angle_deg}")
        return CreaseLine(_ANGLE_LINE[angle_deg], c)


# --- rigid transforms -------------------------------------------------------


@dataclass(frozen=True)
class Transform:
    """Exact planar isometry: x' = a*x + b*y + tx, y' = c*x + d*y + ty.

    The linear part is always one of the 8 signed-permutation matrices, so
    composition, inversion, and application stay in integers.
    """

    a: int
    b: int
    c: int
    d: int
    tx: int
    ty: int

    def apply(self, p: Point) -> Point:
        x, y = p
        return (self.a * x + self.b * y + self.tx, self.c * x + self.d * y + self.ty)

    def compose(self, other: "Transform") -> "Transform":
        """self after other: (self @ other)(p) == self(other(p))."""
        o = other
        return Transform(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.a * o.tx + self.b * o.ty + self.tx,
            self.c * o.tx + self.d * o.ty + self.ty,
        )

    def invert(self) -> "Transform":
        # Orthogonal linear part: inverse == transpose.
        ia, ib, ic, id_ = self.a, self.c, self.b, self.d
        return Transform(
            ia, ib, ic, id_, -(ia * self.tx + ib * self.ty), -(ic * self.tx + id_ * self.ty)
        )

    @property
    def is_reflection(self) -> bool:
        return self.a * self.d - self.b * self.c == -1

    def transport_orientation(self, deg: int) -> int:
        """Map a viewer-CCW orientation through this isometry's linear part."""
        vx, vy = _DIR_VECTOR[deg % 360]
        return _VECTOR_DIR[(self.a * vx + self.b * vy, self.c * vx + self.d * vy)]


IDENTITY = Transform(1, 0, 0, 1, 0, 0)

# Screen-frame direction vectors for viewer-CCW orientations (y is down).
_DIR_VECTOR = {0: (1, 0), 90: (0, -1), 180: (-1, 0), 270: (0, 1)}
_VECTOR_DIR = {v: k for k, v in _DIR_VECTOR.items()}

# Viewer-CCW rotation matrices in screen coordinates.
_ROT_MATRIX = {
    0: (1, 0, 0, 1),
    90: (0, 1, -1, 0),
    180: (-1, 0, 0, -1),
    270: (0, -1, 1, 0),
}


def rotation_ccw(deg: int, center: Point = CENTER) -> Transform:
    """Viewer-CCW rotation by 0/90/180/270 degrees about a lattice point."""
    if deg % 360 not in _ROT_MATRIX:
        raise InputError(f"rotation must be a multiple of 90: {deg}")
    a, b, c, d = _ROT_MATRIX[deg % 360]
    cx, cy = center
    return Transform(a, b, c, d, cx - (a * cx + b * cy), cy - (c * cx + d * cy))


def reflect_point(p: Point, crease: CreaseLine) -> Point:
    """Mirror a point across a crease line (scaled units)."""
    return crease.reflection().apply(p)


def reflect_orientation(deg: int, crease_angle_deg: int) -> int:
    """Mirror a viewer-CCW orientation across a line at the given angle.

    Equals (2*theta - phi) mod 360 and stays within {0, 90, 180, 270}.
    """
    if deg % 90 != 0:
        raise InputError(f"orientation must be a multiple of 90: {deg}")
    if crease_angle_deg not in _ANGLE_LINE:
        raise InputError(f"crease angle must be one of 0/45/90/135: {crease_angle_deg}")
    return (2 * crease_angle_deg - deg) % 360


def rotate_orientation(deg: int, rot_deg: int) -> int:
    return (deg + rot_deg) % 360

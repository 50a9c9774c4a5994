//! Integer-lattice cell sets, rectilinear polygon rasterization and
//! lattice-quotient (torus) arithmetic.
//!
//! Coordinates follow the usual mathematical convention: `x` grows east and
//! `y` grows north. A cell `(x, y)` is the unit square `[x, x+1) × [y, y+1)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} is not axis-parallel or has zero length")]
    NotRectilinear(usize),
    #[error("edges {0} and {1} are both horizontal or both vertical")]
    NotAlternating(usize, usize),
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("lattice basis is degenerate (determinant 0)")]
    DegenerateLattice,
    #[error("polyomino `{0}` is empty")]
    EmptyPolyomino(String),
    #[error("polyomino `{0}` is not edge-connected")]
    DisconnectedPolyomino(String),
}

/// Integer 2-vector, used for translations and lattice generators.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    pub fn scale(self, k: i64) -> Self {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<[i64; 2]> for Vec2 {
    fn from([x, y]: [i64; 2]) -> Self {
        Vec2::new(x, y)
    }
}

impl From<Vec2> for [i64; 2] {
    fn from(v: Vec2) -> Self {
        [v.x, v.y]
    }
}

/// A unit cell of the integer lattice. Ordered by `(y, x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub const fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }

    pub fn shifted(self, v: Vec2) -> Cell {
        Cell::new(self.x + v.x, self.y + v.y)
    }

    pub fn as_vec(self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    /// The four edge-adjacent cells (east, north, west, south).
    pub fn neighbors(self) -> [Cell; 4] {
        [
            Cell::new(self.x + 1, self.y),
            Cell::new(self.x, self.y + 1),
            Cell::new(self.x - 1, self.y),
            Cell::new(self.x, self.y - 1),
        ]
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<[i64; 2]> for Cell {
    fn from([x, y]: [i64; 2]) -> Self {
        Cell::new(x, y)
    }
}

impl From<Cell> for [i64; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Inclusive-exclusive bounding box `[min_x, max_x) × [min_y, max_y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub min_x: i64,
    pub min_y: i64,
    pub max_x: i64,
    pub max_y: i64,
}

impl BoundingBox {
    pub fn width(&self) -> i64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> i64 {
        self.max_y - self.min_y
    }
}

/// A finite, duplicate-free set of cells iterated in `(y, x)` order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellSet {
    cells: BTreeSet<Cell>,
}

impl CellSet {
    pub fn new() -> Self {
        CellSet::default()
    }

    /// All cells of the rectangle `[x0, x0+w) × [y0, y0+h)`.
    pub fn rect(x0: i64, y0: i64, w: i64, h: i64) -> Self {
        (y0..y0 + h)
            .flat_map(|y| (x0..x0 + w).map(move |x| Cell::new(x, y)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    pub fn insert(&mut self, c: Cell) -> bool {
        self.cells.insert(c)
    }

    pub fn remove(&mut self, c: Cell) -> bool {
        self.cells.remove(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    /// Lowest cell in canonical order.
    pub fn first(&self) -> Option<Cell> {
        self.cells.first().copied()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        self.cells.union(&other.cells).copied().collect()
    }

    pub fn intersection(&self, other: &CellSet) -> CellSet {
        self.cells.intersection(&other.cells).copied().collect()
    }

    pub fn difference(&self, other: &CellSet) -> CellSet {
        self.cells.difference(&other.cells).copied().collect()
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.cells.is_disjoint(&other.cells)
    }

    pub fn is_subset(&self, other: &CellSet) -> bool {
        self.cells.is_subset(&other.cells)
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        let mut it = self.iter();
        let first = it.next()?;
        let mut bb = BoundingBox {
            min_x: first.x,
            min_y: first.y,
            max_x: first.x + 1,
            max_y: first.y + 1,
        };
        for c in it {
            bb.min_x = bb.min_x.min(c.x);
            bb.min_y = bb.min_y.min(c.y);
            bb.max_x = bb.max_x.max(c.x + 1);
            bb.max_y = bb.max_y.max(c.y + 1);
        }
        Some(bb)
    }

    /// Shift so that the bounding box starts at the origin; returns the
    /// normalized set and the vector that was subtracted.
    pub fn normalized(&self) -> (CellSet, Vec2) {
        match self.bounding_box() {
            Some(bb) => {
                let v = Vec2::new(bb.min_x, bb.min_y);
                (translate(self, -v), v)
            }
            None => (CellSet::new(), Vec2::ZERO),
        }
    }

    pub fn to_vec(&self) -> Vec<Cell> {
        self.iter().collect()
    }
}

impl FromIterator<Cell> for CellSet {
    fn from_iter<I: IntoIterator<Item = Cell>>(iter: I) -> Self {
        CellSet {
            cells: iter.into_iter().collect(),
        }
    }
}

impl Extend<Cell> for CellSet {
    fn extend<I: IntoIterator<Item = Cell>>(&mut self, iter: I) {
        self.cells.extend(iter)
    }
}

impl<'a> IntoIterator for &'a CellSet {
    type Item = Cell;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Cell>>;
    fn into_iter(self) -> Self::IntoIter {
        self.cells.iter().copied()
    }
}

pub fn translate(s: &CellSet, v: Vec2) -> CellSet {
    s.iter().map(|c| c.shifted(v)).collect()
}

/// True iff the cells form one edge-connected component. The empty set is
/// not connected.
pub fn is_connected(s: &CellSet) -> bool {
    let Some(start) = s.first() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for nb in c.neighbors() {
            if s.contains(nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == s.len()
}

/// A named, non-empty, edge-connected cell set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyomino {
    name: String,
    cells: CellSet,
}

impl Polyomino {
    pub fn new(name: impl Into<String>, cells: CellSet) -> Result<Self, GeometryError> {
        let name = name.into();
        if cells.is_empty() {
            return Err(GeometryError::EmptyPolyomino(name));
        }
        if !is_connected(&cells) {
            return Err(GeometryError::DisconnectedPolyomino(name));
        }
        Ok(Polyomino { name, cells })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }
}

/// Closed rectilinear polygon given by its vertex cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectilinearPolygon {
    vertices: Vec<Vec2>,
}

impl RectilinearPolygon {
    /// Validates that the polygon is rectilinear, alternates horizontal and
    /// vertical edges, and is simple.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 4 {
            return Err(GeometryError::TooFewVertices(n));
        }
        let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
        let horizontal: Vec<bool> = (0..n)
            .map(|i| {
                let (a, b) = edge(i);
                match (a.x == b.x, a.y == b.y) {
                    (false, true) => Ok(true),
                    (true, false) => Ok(false),
                    _ => Err(GeometryError::NotRectilinear(i)),
                }
            })
            .collect::<Result<_, _>>()?;
        for i in 0..n {
            if horizontal[i] == horizontal[(i + 1) % n] {
                return Err(GeometryError::NotAlternating(i, (i + 1) % n));
            }
        }
        // Non-adjacent edges must not touch at all; adjacent edges share
        // exactly their common vertex, which alternation already guarantees.
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a1, a2) = edge(i);
                let (b1, b2) = edge(j);
                if segments_touch(a1, a2, b1, b2) {
                    return Err(GeometryError::SelfIntersecting(i, j));
                }
            }
        }
        Ok(RectilinearPolygon { vertices })
    }

    pub fn from_points(points: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Self::new(points.iter().map(|&(x, y)| Vec2::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Absolute shoelace area.
    pub fn area(&self) -> i64 {
        shoelace(&self.vertices).abs() / 2
    }
}

/// Twice the signed area of a closed vertex loop.
pub(crate) fn shoelace(v: &[Vec2]) -> i64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum()
}

fn segments_touch(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool {
    let (ax0, ax1) = (a1.x.min(a2.x), a1.x.max(a2.x));
    let (ay0, ay1) = (a1.y.min(a2.y), a1.y.max(a2.y));
    let (bx0, bx1) = (b1.x.min(b2.x), b1.x.max(b2.x));
    let (by0, by1) = (b1.y.min(b2.y), b1.y.max(b2.y));
    ax0 <= bx1 && bx0 <= ax1 && ay0 <= by1 && by0 <= ay1
}

/// Cells whose centers lie inside the polygon under the even-odd rule.
///
/// Vertices are integral and cell centers half-integral, so a center never
/// lies on an edge and the scanline crossings are unambiguous.
pub fn rasterize(poly: &RectilinearPolygon) -> CellSet {
    let v = poly.vertices();
    let n = v.len();
    let verticals: Vec<(i64, i64, i64)> = (0..n)
        .filter_map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            (a.x == b.x).then(|| (a.x, a.y.min(b.y), a.y.max(b.y)))
        })
        .collect();
    let y_min = v.iter().map(|p| p.y).min().unwrap_or(0);
    let y_max = v.iter().map(|p| p.y).max().unwrap_or(0);

    let mut out = CellSet::new();
    let mut xs = Vec::new();
    for y in y_min..y_max {
        // scanline through the row's centers: y + 1/2 lies strictly between
        // the edge endpoints iff y0 <= y < y1
        xs.clear();
        xs.extend(
            verticals
                .iter()
                .filter(|&&(_, y0, y1)| y0 <= y && y < y1)
                .map(|&(x, _, _)| x),
        );
        xs.sort_unstable();
        for pair in xs.chunks_exact(2) {
            out.extend((pair[0]..pair[1]).map(|x| Cell::new(x, y)));
        }
    }
    out
}

/// A full-rank sublattice of Z², used to build torus quotients.
///
/// Internally the lattice is kept in Hermite normal form with generators
/// `(width, 0)` and `(shear, height)`; the canonical representatives are
/// the cells of `[0, width) × [0, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[Vec2; 2]", into = "[Vec2; 2]")]
pub struct TorusLattice {
    b1: Vec2,
    b2: Vec2,
    width: i64,
    shear: i64,
    height: i64,
}

impl TorusLattice {
    pub fn new(b1: Vec2, b2: Vec2) -> Result<Self, GeometryError> {
        let det = b1.x * b2.y - b1.y * b2.x;
        if det == 0 {
            return Err(GeometryError::DegenerateLattice);
        }
        let (g, s, t) = ext_gcd(b1.y, b2.y);
        let (mut shear, mut height) = (s * b1.x + t * b2.x, g);
        if height < 0 {
            shear = -shear;
            height = -height;
        }
        let width = det.abs() / height;
        Ok(TorusLattice {
            b1,
            b2,
            width,
            shear: shear.rem_euclid(width),
            height,
        })
    }

    pub fn basis(&self) -> (Vec2, Vec2) {
        (self.b1, self.b2)
    }

    pub fn determinant(&self) -> i64 {
        self.b1.x * self.b2.y - self.b1.y * self.b2.x
    }

    /// Number of cells in the quotient, `|det|`.
    pub fn cell_count(&self) -> usize {
        (self.width * self.height) as usize
    }

    /// Extent of the canonical fundamental domain.
    pub fn domain(&self) -> (i64, i64) {
        (self.width, self.height)
    }

    pub fn reduce(&self, c: Cell) -> Cell {
        let k = c.y.div_euclid(self.height);
        let y = c.y - k * self.height;
        let x = (c.x - k * self.shear).rem_euclid(self.width);
        Cell::new(x, y)
    }

    pub fn reduce_vec(&self, v: Vec2) -> Vec2 {
        self.reduce(Cell::new(v.x, v.y)).as_vec()
    }

    /// Dense index of a cell's representative, in `0..cell_count()`.
    pub fn index_of(&self, c: Cell) -> usize {
        let r = self.reduce(c);
        (r.y * self.width + r.x) as usize
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        let i = index as i64;
        Cell::new(i % self.width, i / self.width)
    }

    pub fn contains(&self, v: Vec2) -> bool {
        self.reduce_vec(v) == Vec2::ZERO
    }

    /// True when both lattices generate the same subgroup of Z².
    pub fn same_lattice(&self, other: &TorusLattice) -> bool {
        (self.width, self.shear, self.height) == (other.width, other.shear, other.height)
    }

    pub fn representatives(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(|i| self.cell_at(i))
    }
}

impl TryFrom<[Vec2; 2]> for TorusLattice {
    type Error = GeometryError;
    fn try_from([b1, b2]: [Vec2; 2]) -> Result<Self, Self::Error> {
        TorusLattice::new(b1, b2)
    }
}

impl From<TorusLattice> for [Vec2; 2] {
    fn from(l: TorusLattice) -> Self {
        [l.b1, l.b2]
    }
}

pub fn reduce_mod(c: Cell, lattice: &TorusLattice) -> Cell {
    lattice.reduce(c)
}

/// Returns `(g, s, t)` with `g = s·a + t·b = gcd(a, b)` (up to sign).
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

//! Translational tilings of finite regions: an exact-cover search engine
//! and a linear-time cover checker.
//!
//! Region cells are the constraints and piece placements the choices. The
//! search always branches on the uncovered cell with the fewest remaining
//! candidates (lowest `(y, x)` on ties) and tries candidates in placement
//! order, so results are deterministic.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Cell, CellSet, Polyomino, TorusLattice, Vec2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("placement {index} refers to unknown piece `{name}`")]
    UnknownPiece { index: usize, name: String },
    #[error("rectangle dimensions must be positive, got {0}×{1}")]
    EmptyRectangle(i64, i64),
    #[error("search stopped after {nodes} nodes with {partial_count} tilings found")]
    LimitExceeded { nodes: u64, partial_count: u64 },
}

/// A finite stand-in for the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `[0, width) × [0, height)`.
    Rectangle { width: i64, height: i64 },
    /// The quotient of the plane by a lattice.
    Torus(TorusLattice),
}

impl Region {
    pub fn rectangle(width: i64, height: i64) -> Result<Self, SolverError> {
        if width <= 0 || height <= 0 {
            return Err(SolverError::EmptyRectangle(width, height));
        }
        Ok(Region::Rectangle { width, height })
    }

    pub fn cell_count(&self) -> usize {
        match self {
            Region::Rectangle { width, height } => (width * height) as usize,
            Region::Torus(l) => l.cell_count(),
        }
    }

    /// Dense index of a cell, or `None` if it lies outside a rectangle.
    pub fn index_of(&self, c: Cell) -> Option<usize> {
        match self {
            Region::Rectangle { width, height } => ((0..*width).contains(&c.x)
                && (0..*height).contains(&c.y))
            .then(|| (c.y * width + c.x) as usize),
            Region::Torus(l) => Some(l.index_of(c)),
        }
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        match self {
            Region::Rectangle { width, .. } => {
                let i = index as i64;
                Cell::new(i % width, i / width)
            }
            Region::Torus(l) => l.cell_at(index),
        }
    }

    /// Canonical form of a placement offset.
    fn canonical_offset(&self, v: Vec2) -> Vec2 {
        match self {
            Region::Rectangle { .. } => v,
            Region::Torus(l) => l.reduce_vec(v),
        }
    }
}

/// A translated copy of a named piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub piece: String,
    pub at: Vec2,
}

impl Placement {
    pub fn new(piece: impl Into<String>, at: Vec2) -> Self {
        Placement {
            piece: piece.into(),
            at,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overlap {
    pub cell: Cell,
    /// Index of the placement that covered the cell first.
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CoverReport {
    pub uncovered: Vec<Cell>,
    pub overlaps: Vec<Overlap>,
    /// Placement cells falling outside a rectangular region.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outside: Vec<(Cell, usize)>,
}

impl CoverReport {
    pub fn is_exact(&self) -> bool {
        self.uncovered.is_empty() && self.overlaps.is_empty() && self.outside.is_empty()
    }
}

fn piece_index(pieces: &[Polyomino]) -> HashMap<&str, usize> {
    pieces
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name(), i))
        .collect()
}

/// Accumulates coverage of every region cell in one pass over the
/// placements and reports gaps and double covers.
pub fn check_tiling(
    region: &Region,
    pieces: &[Polyomino],
    placements: &[Placement],
) -> Result<CoverReport, SolverError> {
    let by_name = piece_index(pieces);
    let mut first = vec![usize::MAX; region.cell_count()];
    let mut report = CoverReport::default();
    for (pi, pl) in placements.iter().enumerate() {
        let Some(&k) = by_name.get(pl.piece.as_str()) else {
            return Err(SolverError::UnknownPiece {
                index: pi,
                name: pl.piece.clone(),
            });
        };
        for c in pieces[k].cells().iter() {
            let c = c.shifted(pl.at);
            match region.index_of(c) {
                None => report.outside.push((c, pi)),
                Some(i) if first[i] == usize::MAX => first[i] = pi,
                Some(i) => report.overlaps.push(Overlap {
                    cell: region.cell_at(i),
                    first: first[i],
                    second: pi,
                }),
            }
        }
    }
    report.uncovered = first
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f == usize::MAX)
        .map(|(i, _)| region.cell_at(i))
        .collect();
    Ok(report)
}

/// Every placement of every piece lying entirely inside `container`.
pub fn contained_placements(container: &CellSet, pieces: &[Polyomino]) -> Vec<Placement> {
    let mut out = Vec::new();
    for p in pieces {
        let Some(anchor) = p.cells().first() else {
            continue;
        };
        for target in container.iter() {
            let v = target.as_vec() - anchor.as_vec();
            if p.cells().iter().all(|c| container.contains(c.shifted(v))) {
                out.push(Placement::new(p.name(), v));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Choice {
    piece: usize,
    at: Vec2,
    cells: Vec<usize>,
}

/// All ways to put each piece into a region, with a per-cell index of the
/// placements that cover it.
#[derive(Debug, Clone)]
pub struct PlacementUniverse {
    region: Region,
    pieces: Vec<Polyomino>,
    choices: Vec<Choice>,
    by_cell: Vec<Vec<usize>>,
}

impl PlacementUniverse {
    pub fn new(region: Region, pieces: Vec<Polyomino>) -> Self {
        let mut choices = Vec::new();
        let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
        for (k, p) in pieces.iter().enumerate() {
            for at in candidate_offsets(&region, p) {
                let mut cells: Vec<usize> = match p
                    .cells()
                    .iter()
                    .map(|c| region.index_of(c.shifted(at)))
                    .collect::<Option<Vec<_>>>()
                {
                    Some(c) => c,
                    None => continue,
                };
                cells.sort_unstable();
                let len = cells.len();
                cells.dedup();
                // a piece larger than the torus can wrap onto itself
                if cells.len() != len || !seen.insert((k, cells.clone())) {
                    continue;
                }
                choices.push(Choice {
                    piece: k,
                    at: region.canonical_offset(at),
                    cells,
                });
            }
        }
        let mut by_cell = vec![Vec::new(); region.cell_count()];
        for (i, ch) in choices.iter().enumerate() {
            for &c in &ch.cells {
                by_cell[c].push(i);
            }
        }
        PlacementUniverse {
            region,
            pieces,
            choices,
            by_cell,
        }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn pieces(&self) -> &[Polyomino] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn placement(&self, i: usize) -> Placement {
        let ch = &self.choices[i];
        Placement::new(self.pieces[ch.piece].name(), ch.at)
    }

    pub fn placements(&self) -> Vec<Placement> {
        (0..self.len()).map(|i| self.placement(i)).collect()
    }
}

fn candidate_offsets(region: &Region, p: &Polyomino) -> Vec<Vec2> {
    let Some(bb) = p.cells().bounding_box() else {
        return Vec::new();
    };
    match region {
        Region::Rectangle { width, height } => {
            let xs = -bb.min_x..=width - bb.max_x;
            let ys = -bb.min_y..=height - bb.max_y;
            ys.flat_map(|y| xs.clone().map(move |x| Vec2::new(x, y)))
                .collect()
        }
        Region::Torus(l) => {
            // one offset per class: the lowest cell lands on each representative
            let low = p.cells().first().expect("non-empty").as_vec();
            l.representatives().map(|r| r.as_vec() - low).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    First,
    Count,
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solutions {
    pub count: u64,
    pub tilings: Vec<Vec<Placement>>,
}

/// Can `total` be written as a non-negative integer combination of `parts`?
fn area_representable(total: usize, parts: &[usize]) -> bool {
    let mut ok = vec![false; total + 1];
    ok[0] = true;
    for s in 1..=total {
        ok[s] = parts.iter().any(|&p| p > 0 && p <= s && ok[s - p]);
    }
    ok[total]
}

struct Search<'a> {
    u: &'a PlacementUniverse,
    covered: Vec<bool>,
    /// Number of covered cells per choice; a choice is live at zero.
    blocked: Vec<u32>,
    /// Live choices per cell.
    live: Vec<u32>,
    stack: Vec<usize>,
    mode: SolveMode,
    out: Solutions,
    nodes: &'a AtomicU64,
    limit: Option<u64>,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(
        u: &'a PlacementUniverse,
        mode: SolveMode,
        nodes: &'a AtomicU64,
        limit: Option<u64>,
    ) -> Self {
        Search {
            u,
            covered: vec![false; u.region.cell_count()],
            blocked: vec![0; u.choices.len()],
            live: u.by_cell.iter().map(|v| v.len() as u32).collect(),
            stack: Vec::new(),
            mode,
            out: Solutions::default(),
            nodes,
            limit,
            aborted: false,
        }
    }

    fn choose(&mut self, ch: usize) {
        for &c in &self.u.choices[ch].cells {
            self.covered[c] = true;
            for &other in &self.u.by_cell[c] {
                if self.blocked[other] == 0 {
                    for &d in &self.u.choices[other].cells {
                        self.live[d] -= 1;
                    }
                }
                self.blocked[other] += 1;
            }
        }
        self.stack.push(ch);
    }

    fn unchoose(&mut self, ch: usize) {
        self.stack.pop();
        for &c in self.u.choices[ch].cells.iter().rev() {
            for &other in self.u.by_cell[c].iter().rev() {
                self.blocked[other] -= 1;
                if self.blocked[other] == 0 {
                    for &d in &self.u.choices[other].cells {
                        self.live[d] += 1;
                    }
                }
            }
            self.covered[c] = false;
        }
    }

    /// Uncovered cell with the fewest live choices, or `None` when all covered.
    fn pick_cell(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for (i, &cov) in self.covered.iter().enumerate() {
            if cov {
                continue;
            }
            let n = self.live[i];
            if best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, i));
                if n == 0 {
                    break;
                }
            }
        }
        best.map(|(_, i)| i)
    }

    fn live_choices(&self, cell: usize) -> Vec<usize> {
        self.u.by_cell[cell]
            .iter()
            .copied()
            .filter(|&ch| self.blocked[ch] == 0)
            .collect()
    }

    fn finished(&self) -> bool {
        self.aborted || (self.mode == SolveMode::First && self.out.count > 0)
    }

    fn record(&mut self) {
        self.out.count += 1;
        if self.mode != SolveMode::Count {
            let mut sol: Vec<usize> = self.stack.clone();
            sol.sort_unstable();
            self.out
                .tilings
                .push(sol.into_iter().map(|i| self.u.placement(i)).collect());
        }
    }

    fn run(&mut self) {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.limit.is_some_and(|l| n > l) {
            self.aborted = true;
            return;
        }
        let Some(cell) = self.pick_cell() else {
            self.record();
            return;
        };
        for ch in self.live_choices(cell) {
            if self.finished() {
                return;
            }
            self.choose(ch);
            self.run();
            self.unchoose(ch);
        }
    }
}

/// Finds, counts or lists the tilings of the universe's region by
/// translated pieces (each piece usable any number of times).
///
/// The branches of the first decision are explored in parallel on the
/// current rayon pool and merged in branch order. `limit` caps the total
/// number of search nodes.
pub fn solve(
    universe: &PlacementUniverse,
    mode: SolveMode,
    limit: Option<u64>,
) -> Result<Solutions, SolverError> {
    let areas: Vec<usize> = universe.pieces.iter().map(|p| p.area()).collect();
    if !area_representable(universe.region.cell_count(), &areas) {
        return Ok(Solutions::default());
    }
    let nodes = AtomicU64::new(0);
    let root = Search::new(universe, mode, &nodes, limit);
    let Some(cell) = root.pick_cell() else {
        return Ok(Solutions {
            count: 1,
            tilings: if mode == SolveMode::Count {
                Vec::new()
            } else {
                vec![Vec::new()]
            },
        });
    };
    let branches = root.live_choices(cell);
    drop(root);
    let results: Vec<(Solutions, bool)> = branches
        .into_par_iter()
        .map(|ch| {
            let mut s = Search::new(universe, mode, &nodes, limit);
            s.choose(ch);
            s.run();
            (s.out, s.aborted)
        })
        .collect();
    let mut out = Solutions::default();
    let mut aborted = false;
    for (sol, ab) in results {
        aborted |= ab;
        if mode == SolveMode::First && out.count > 0 {
            break;
        }
        out.count += sol.count;
        out.tilings.extend(sol.tilings);
    }
    if aborted {
        return Err(SolverError::LimitExceeded {
            nodes: nodes.load(Ordering::Relaxed),
            partial_count: out.count,
        });
    }
    Ok(out)
}

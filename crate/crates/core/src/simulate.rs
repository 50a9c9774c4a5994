//! Forward simulation: a periodic Wang tiling becomes a periodic tiling by
//! the seven compiled pieces, expressed on a torus quotient of the plane.
//!
//! Wang square cells `(a, b)` are sheared into diamond coordinates
//! `(u, v) = (a, b - a)`. Each diamond cell owns one connector, one row of
//! encoder plus fillers, the linkers in the gap row above it and the
//! T-fillers in its unused slots.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{BlockKind, TabAnchor, BLOCK};
use crate::compiler::{encode_color, encoder_block_at, CompileError, EncoderLayout, PieceKind};
use crate::geometry::{GeometryError, TorusLattice, Vec2};
use crate::solver::Placement;
use crate::wang::{validate, WangError, WangTileSet, WangTiling};

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error(transparent)]
    Wang(#[from] WangError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("simulation needs a torus tiling")]
    NotTorus,
    #[error("tiling has {0} colour mismatches")]
    InvalidTiling(usize),
    #[error("tile sets need at least 2 tiles and 2 colours (got n={n}, m={m})")]
    Unsupported { n: usize, m: usize },
}

pub fn wang_cell_to_diamond(a: i64, b: i64) -> (i64, i64) {
    (a, b - a)
}

/// Block-unit geometry of the global pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternLattice {
    pub layout: EncoderLayout,
    /// Horizontal connector period in blocks, `2n(2t + 2)`.
    pub period: i64,
    pub step_right: Vec2,
    pub step_up: Vec2,
}

impl PatternLattice {
    pub fn new(n: usize, t: usize) -> Self {
        let period = 2 * n as i64 * (2 * t as i64 + 2);
        PatternLattice {
            layout: EncoderLayout::new(n, t),
            period,
            step_right: Vec2::new(period / 2, -6),
            step_up: Vec2::new(period / 2, 6),
        }
    }

    /// Lower-left block of the connector of diamond cell `(u, v)`.
    pub fn connector(&self, u: i64, v: i64) -> Vec2 {
        Vec2::new(self.period * u + self.period / 2 * v, 6 * v - 3)
    }

    /// Block-unit lattice of a `p × q` Wang torus.
    pub fn block_torus(&self, p: usize, q: usize) -> Result<TorusLattice, GeometryError> {
        TorusLattice::new(
            self.step_right.scale(p as i64),
            self.step_up.scale(q as i64),
        )
    }

    /// Unit lattice of a `p × q` Wang torus.
    pub fn unit_torus(&self, p: usize, q: usize) -> Result<TorusLattice, GeometryError> {
        let s = BLOCK * p as i64;
        let r = BLOCK * q as i64;
        TorusLattice::new(self.step_right.scale(s), self.step_up.scale(r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulatedTiling {
    pub lattice: TorusLattice,
    pub placements: Vec<Placement>,
}

/// One piece at a block position, before scaling to units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Emitted {
    kind: PieceKind,
    block: Vec2,
    /// Set for T-fillers, which sit inside a block rather than on its corner.
    anchor: Option<TabAnchor>,
}

impl Emitted {
    fn unit_offset(&self) -> Vec2 {
        let base = self.block.scale(BLOCK);
        match self.anchor {
            Some(a) => base + a.offset(),
            None => base,
        }
    }
}

fn check_supported(set: &WangTileSet) -> Result<(), SimulateError> {
    let (n, m) = (set.tile_count(), set.color_count());
    if n < 2 || m < 2 {
        return Err(SimulateError::Unsupported { n, m });
    }
    Ok(())
}

fn linker_kind(color: usize, t: usize, bit: usize) -> Result<PieceKind, CompileError> {
    Ok(match encode_color(color, t)?[bit] {
        BlockKind::SlotRight => PieceKind::RLinker,
        _ => PieceKind::LLinker,
    })
}

/// Pieces owned by diamond cell `(u, v)` carrying tile `tile` (0-based).
fn emit_cell(
    set: &WangTileSet,
    pat: &PatternLattice,
    u: i64,
    v: i64,
    tile: usize,
) -> Result<Vec<Emitted>, CompileError> {
    let layout = pat.layout;
    let (n, t) = (layout.n, layout.t);
    let seg = layout.segment_width();
    let k = (n - 1 - tile) as i64;
    let plain = |kind, block| Emitted {
        kind,
        block,
        anchor: None,
    };

    let con = pat.connector(u, v);
    let row = 6 * v;
    let enc = Vec2::new(con.x + 2 + 2 * k, row);
    let mut out = vec![
        plain(PieceKind::Connector, con),
        plain(PieceKind::Encoder, enc),
    ];
    for j in 0..k {
        out.push(plain(PieceKind::AFiller, Vec2::new(con.x + 2 + 2 * j, row)));
    }
    for j in 0..(n as i64 - 1 - k) {
        let x = enc.x + layout.width() + 2 * j;
        out.push(plain(PieceKind::BFiller, Vec2::new(x, row)));
    }

    let wt = set.tiles()[tile];
    let upper = pat.connector(u, v + 1);
    for j in 0..t {
        let dx = seg * (j as i64 + 1);
        out.push(plain(
            linker_kind(wt.west, t, j)?,
            Vec2::new(con.x + dx, row + 3),
        ));
        out.push(plain(
            linker_kind(wt.north, t, j)?,
            Vec2::new(upper.x + dx, row + 3),
        ));
    }

    let own: Vec<i64> = (0..t)
        .flat_map(|j| {
            [
                layout.bit_column(tile, j, false),
                layout.bit_column(tile, j, true),
            ]
        })
        .collect();
    for r in [0, 2] {
        for col in (0..layout.width()).step_by(2) {
            if layout.is_structural(col) || own.contains(&col) {
                continue;
            }
            let anchor = TabAnchor::for_slot(encoder_block_at(set, col, r)?);
            debug_assert!(anchor.is_some());
            out.push(Emitted {
                kind: PieceKind::TFiller,
                block: Vec2::new(enc.x + col, row + r),
                anchor,
            });
        }
    }
    Ok(out)
}

/// Emits every cell of the tiling without checking edge colours.
fn emit_all(
    set: &WangTileSet,
    tiling: &WangTiling,
) -> Result<(PatternLattice, Vec<Emitted>), SimulateError> {
    check_supported(set)?;
    if !tiling.torus {
        return Err(SimulateError::NotTorus);
    }
    validate(set, tiling)?; // shape and index checks only; violations handled by callers
    let pat = PatternLattice::new(set.tile_count(), set.bit_width());
    let cells: Vec<(usize, usize)> = (0..tiling.q)
        .flat_map(|b| (0..tiling.p).map(move |a| (a, b)))
        .collect();
    let per_cell: Result<Vec<Vec<Emitted>>, CompileError> = cells
        .par_iter()
        .map(|&(a, b)| {
            let (u, v) = wang_cell_to_diamond(a as i64, b as i64);
            emit_cell(set, &pat, u, v, tiling.tile_at(a, b))
        })
        .collect();
    Ok((pat, per_cell?.into_iter().flatten().collect()))
}

fn to_placements(lattice: &TorusLattice, emitted: &[Emitted]) -> Vec<Placement> {
    let mut keyed: Vec<(usize, Vec2)> = emitted
        .iter()
        .map(|e| (e.kind.index(), lattice.reduce_vec(e.unit_offset())))
        .collect();
    keyed.sort_by_key(|&(k, v)| (k, v.y, v.x));
    keyed
        .into_iter()
        .map(|(k, v)| Placement::new(PieceKind::ALL[k].name(), v))
        .collect()
}

/// Placements of the seven pieces realizing a valid torus Wang tiling.
pub fn emit_placements(
    set: &WangTileSet,
    tiling: &WangTiling,
) -> Result<SimulatedTiling, SimulateError> {
    let violations = validate(set, tiling)?;
    if !violations.is_empty() {
        return Err(SimulateError::InvalidTiling(violations.len()));
    }
    emit_placements_unchecked(set, tiling)
}

/// As [`emit_placements`] but accepts tilings with colour mismatches; the
/// result then fails to cover exactly.
pub fn emit_placements_unchecked(
    set: &WangTileSet,
    tiling: &WangTiling,
) -> Result<SimulatedTiling, SimulateError> {
    let (pat, emitted) = emit_all(set, tiling)?;
    let lattice = pat.unit_torus(tiling.p, tiling.q)?;
    Ok(SimulatedTiling {
        placements: to_placements(&lattice, &emitted),
        lattice,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkerEnd {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentMismatch {
    /// Unit offset of the linker, reduced modulo the torus lattice.
    pub linker: Placement,
    pub end: LinkerEnd,
    pub expected: BlockKind,
    /// Encoder block under the tab, if any.
    pub found: Option<BlockKind>,
}

/// Checks that both tabs of every emitted linker sit in encoder slots of
/// the linker's own kind. Accepts tilings with colour mismatches.
pub fn linker_alignment_check(
    set: &WangTileSet,
    tiling: &WangTiling,
) -> Result<Vec<AlignmentMismatch>, SimulateError> {
    let (pat, emitted) = emit_all(set, tiling)?;
    let blocks = pat.block_torus(tiling.p, tiling.q)?;
    let units = pat.unit_torus(tiling.p, tiling.q)?;
    let layout = pat.layout;

    let mut slots: HashMap<Vec2, BlockKind> = HashMap::new();
    for e in emitted.iter().filter(|e| e.kind == PieceKind::Encoder) {
        for r in [0, 2] {
            for col in (0..layout.width()).step_by(2) {
                let kind = encoder_block_at(set, col, r)?;
                if kind.is_slot() {
                    slots.insert(blocks.reduce_vec(e.block + Vec2::new(col, r)), kind);
                }
            }
        }
    }

    let mut out = Vec::new();
    for e in &emitted {
        let expected = match e.kind {
            PieceKind::LLinker => BlockKind::SlotLeft,
            PieceKind::RLinker => BlockKind::SlotRight,
            _ => continue,
        };
        for (end, dy) in [(LinkerEnd::Lower, -1), (LinkerEnd::Upper, 3)] {
            let found = slots
                .get(&blocks.reduce_vec(e.block + Vec2::new(0, dy)))
                .copied();
            if found != Some(expected) {
                out.push(AlignmentMismatch {
                    linker: Placement::new(e.kind.name(), units.reduce_vec(e.unit_offset())),
                    end,
                    expected,
                    found,
                });
            }
        }
    }
    out.sort_by_key(|m| (m.linker.at.y, m.linker.at.x, m.end as u8));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::solver::{check_tiling, Region};
    use crate::wang::tests::three_tiles;
    use crate::wang::{find_periodic, WangTile};
    use std::collections::BTreeSet;

    fn three_tile_tiling() -> WangTiling {
        WangTiling::torus(3, 1, vec![0, 1, 2])
    }

    fn counts(sim: &SimulatedTiling) -> [usize; 7] {
        let mut c = [0; 7];
        for p in &sim.placements {
            c[PieceKind::from_name(&p.piece).unwrap().index()] += 1;
        }
        c
    }

    #[test]
    fn diamond_coordinates() {
        assert_eq!(wang_cell_to_diamond(0, 0), (0, 0));
        assert_eq!(wang_cell_to_diamond(0, 1), (0, 1));
        assert_eq!(wang_cell_to_diamond(1, 0), (1, -1));
    }

    #[test]
    fn pattern_lattice_three_tiles() {
        let pat = PatternLattice::new(3, 2);
        assert_eq!(pat.period, 36);
        assert_eq!(pat.connector(0, 0), Vec2::new(0, -3));
        assert_eq!(pat.connector(1, -1), Vec2::new(18, -9));
        let l = pat.unit_torus(3, 1).unwrap();
        let expected = TorusLattice::new(Vec2::new(540, -180), Vec2::new(180, 60)).unwrap();
        assert!(l.same_lattice(&expected));
        assert_eq!(l.cell_count(), 64800);
    }

    #[test]
    fn three_tile_placement_census() {
        let sim = emit_placements(&three_tiles(), &three_tile_tiling()).unwrap();
        assert_eq!(sim.placements.len(), 72);
        // 2 + (n-1) + 2t + 4t(n-1) per cell with n = 3, t = 2
        assert_eq!(2 + 2 + 4 + 16, 24);
        let c = counts(&sim);
        assert_eq!(c[PieceKind::Encoder.index()], 3);
        assert_eq!(c[PieceKind::Connector.index()], 3);
        assert_eq!(
            c[PieceKind::AFiller.index()] + c[PieceKind::BFiller.index()],
            6
        );
        assert_eq!(
            c[PieceKind::LLinker.index()] + c[PieceKind::RLinker.index()],
            12
        );
        assert_eq!(c[PieceKind::TFiller.index()], 48);
    }

    #[test]
    fn configuration_index() {
        let set = three_tiles();
        let pat = PatternLattice::new(3, 2);
        for tile in 0..3 {
            let e = emit_cell(&set, &pat, 0, 0, tile).unwrap();
            let a = e.iter().filter(|e| e.kind == PieceKind::AFiller).count();
            let b = e.iter().filter(|e| e.kind == PieceKind::BFiller).count();
            assert_eq!((a, b), (2 - tile, tile));
        }
    }

    #[test]
    fn three_tiles_cover_torus_exactly() {
        let set = three_tiles();
        let pieces = compile(&set).unwrap();
        let sim = emit_placements(&set, &three_tile_tiling()).unwrap();
        let areas = pieces.areas();
        let total: usize = sim
            .placements
            .iter()
            .map(|p| areas[PieceKind::from_name(&p.piece).unwrap().index()])
            .sum();
        assert_eq!(total, 64800);
        assert_eq!(total / 3, 21600);
        let region = Region::Torus(sim.lattice);
        let rep = check_tiling(&region, pieces.pieces(), &sim.placements).unwrap();
        assert!(
            rep.is_exact(),
            "{} gaps, {} overlaps",
            rep.uncovered.len(),
            rep.overlaps.len()
        );
        assert!(linker_alignment_check(&set, &three_tile_tiling())
            .unwrap()
            .is_empty());

        let mut missing = sim.placements.clone();
        let i = missing.iter().position(|p| p.piece == "T-filler").unwrap();
        missing.remove(i);
        let rep = check_tiling(&region, pieces.pieces(), &missing).unwrap();
        assert_eq!((rep.uncovered.len(), rep.overlaps.len()), (18, 0));

        let mut dup = sim.placements.clone();
        let con = dup.iter().find(|p| p.piece == "connector").unwrap().clone();
        dup.push(con);
        let rep = check_tiling(&region, pieces.pieces(), &dup).unwrap();
        assert_eq!((rep.uncovered.len(), rep.overlaps.len()), (0, 4096));
    }

    #[test]
    fn broken_adjacency_is_detected() {
        let set = three_tiles();
        let bad = WangTiling::torus(3, 1, vec![1, 1, 2]);
        assert!(matches!(
            emit_placements(&set, &bad),
            Err(SimulateError::InvalidTiling(_))
        ));
        let report = linker_alignment_check(&set, &bad).unwrap();
        assert!(!report.is_empty());
        assert!(report
            .iter()
            .all(|m| m.found.is_some_and(|f| f != m.expected)));
        let sim = emit_placements_unchecked(&set, &bad).unwrap();
        let pieces = compile(&set).unwrap();
        let rep = check_tiling(
            &Region::Torus(sim.lattice),
            pieces.pieces(),
            &sim.placements,
        )
        .unwrap();
        assert!(!rep.is_exact());
    }

    #[test]
    fn smallest_set_on_unit_torus() {
        let tile = |n, e, s, w| WangTile {
            north: n,
            east: e,
            south: s,
            west: w,
        };
        let set = WangTileSet::from_indices(2, vec![tile(1, 0, 1, 0), tile(0, 1, 1, 0)]).unwrap();
        let (p, q, tiling) = find_periodic(&set, 4).unwrap();
        assert_eq!((p, q), (1, 1));
        assert!(linker_alignment_check(&set, &tiling).unwrap().is_empty());
        let sim = emit_placements(&set, &tiling).unwrap();
        // n = 2, t = 1: 2 + 1 + 2 + 4 placements
        assert_eq!(sim.placements.len(), 9);
        let pieces = compile(&set).unwrap();
        let rep = check_tiling(
            &Region::Torus(sim.lattice),
            pieces.pieces(),
            &sim.placements,
        )
        .unwrap();
        assert!(rep.is_exact());
        assert_eq!(sim.lattice.cell_count(), 600 * 16);
    }

    #[test]
    fn connectors_form_the_step_lattice() {
        let set = three_tiles();
        let tiling = three_tile_tiling().unrolled(2, 3);
        let sim = emit_placements(&set, &tiling).unwrap();
        let pat = PatternLattice::new(3, 2);
        let steps =
            TorusLattice::new(pat.step_right.scale(BLOCK), pat.step_up.scale(BLOCK)).unwrap();
        let origin = pat.connector(0, 0).scale(BLOCK);
        let cons: Vec<Vec2> = sim
            .placements
            .iter()
            .filter(|p| p.piece == "connector")
            .map(|p| p.at)
            .collect();
        assert_eq!(cons.len(), 18);
        for c in &cons {
            assert!(steps.contains(*c - origin));
        }
        // distinct modulo the torus lattice
        let distinct: BTreeSet<(i64, i64)> = cons.iter().map(|c| (c.x, c.y)).collect();
        assert_eq!(distinct.len(), 18);
    }

    #[test]
    fn shifting_the_tiling_translates_placements() {
        let set = three_tiles();
        let tiling = three_tile_tiling().unrolled(1, 2);
        let base = emit_placements(&set, &tiling).unwrap();
        let pat = PatternLattice::new(3, 2);
        for (da, db) in [(1, 0), (0, 1), (2, 1)] {
            let moved = emit_placements(&set, &tiling.shifted(da, db)).unwrap();
            let shift = (pat.step_right.scale(da) + pat.step_up.scale(db)).scale(BLOCK);
            let mut expect: Vec<(String, Vec2)> = base
                .placements
                .iter()
                .map(|p| (p.piece.clone(), base.lattice.reduce_vec(p.at + shift)))
                .collect();
            let mut got: Vec<(String, Vec2)> = moved
                .placements
                .iter()
                .map(|p| (p.piece.clone(), p.at))
                .collect();
            expect.sort_by_key(|(n, v)| (n.clone(), v.y, v.x));
            got.sort_by_key(|(n, v)| (n.clone(), v.y, v.x));
            assert_eq!(got, expect, "shift ({da},{db})");
        }
    }

    #[test]
    fn rejects_non_torus_and_small_sets() {
        let set = three_tiles();
        let mut t = three_tile_tiling();
        t.torus = false;
        assert!(matches!(
            emit_placements(&set, &t),
            Err(SimulateError::NotTorus)
        ));
        let one = WangTileSet::from_indices(
            1,
            vec![WangTile {
                north: 0,
                east: 0,
                south: 0,
                west: 0,
            }],
        )
        .unwrap();
        let t = WangTiling::torus(1, 1, vec![0]);
        assert!(matches!(
            emit_placements(&one, &t),
            Err(SimulateError::Unsupported { .. })
        ));
    }
}

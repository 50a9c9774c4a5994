//! The 10×10 building blocks from which every piece is assembled.
//!
//! Each block is a functional square, possibly with a slot (`l`, `r`), a
//! bump protruding into a neighbouring block frame (`Y⁺`, `Y⁻`, `X`, `A`,
//! `B`), or a dent cut out of its own frame (`y⁺`, `y⁻`, `x`, `a`, `b`).
//! The tab is the free key shape that fills a slot.
//!
//! Every shape is transcribed as one rectilinear polygon and rasterized
//! once; dents are stored as the cells missing from the square.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{rasterize, translate, CellSet, RectilinearPolygon, Vec2};

/// Side length of a block in unit cells.
pub const BLOCK: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    Functional,
    SlotLeft,
    SlotRight,
    Tab,
    YPlus,
    YPlusDent,
    YMinus,
    YMinusDent,
    XBump,
    XDent,
    ABump,
    ADent,
    BBump,
    BDent,
}

impl BlockKind {
    pub const ALL: [BlockKind; 14] = [
        BlockKind::Functional,
        BlockKind::SlotLeft,
        BlockKind::SlotRight,
        BlockKind::Tab,
        BlockKind::YPlus,
        BlockKind::YPlusDent,
        BlockKind::YMinus,
        BlockKind::YMinusDent,
        BlockKind::XBump,
        BlockKind::XDent,
        BlockKind::ABump,
        BlockKind::ADent,
        BlockKind::BBump,
        BlockKind::BDent,
    ];

    pub const BUMPS: [BlockKind; 5] = [
        BlockKind::YPlus,
        BlockKind::YMinus,
        BlockKind::XBump,
        BlockKind::ABump,
        BlockKind::BBump,
    ];

    pub const DENTS: [BlockKind; 5] = [
        BlockKind::YPlusDent,
        BlockKind::YMinusDent,
        BlockKind::XDent,
        BlockKind::ADent,
        BlockKind::BDent,
    ];

    /// Short label as used in level-2 diagrams.
    pub fn label(self) -> &'static str {
        match self {
            BlockKind::Functional => ".",
            BlockKind::SlotLeft => "l",
            BlockKind::SlotRight => "r",
            BlockKind::Tab => "T",
            BlockKind::YPlus => "Y+",
            BlockKind::YPlusDent => "y+",
            BlockKind::YMinus => "Y-",
            BlockKind::YMinusDent => "y-",
            BlockKind::XBump => "X",
            BlockKind::XDent => "x",
            BlockKind::ABump => "A",
            BlockKind::ADent => "a",
            BlockKind::BBump => "B",
            BlockKind::BDent => "b",
        }
    }

    pub fn is_slot(self) -> bool {
        matches!(self, BlockKind::SlotLeft | BlockKind::SlotRight)
    }

    /// Block-grid step from a bump block to the block its bump enters.
    pub fn bump_direction(self) -> Option<(i64, i64)> {
        match self {
            BlockKind::YPlus => Some((0, 1)),
            BlockKind::YMinus => Some((0, -1)),
            BlockKind::XBump | BlockKind::ABump | BlockKind::BBump => Some((1, 0)),
            _ => None,
        }
    }

    /// Block-grid step from a dent block to the block whose bump fills it.
    pub fn dent_direction(self) -> Option<(i64, i64)> {
        match self {
            BlockKind::YPlusDent => Some((0, -1)),
            BlockKind::YMinusDent => Some((0, 1)),
            BlockKind::XDent | BlockKind::ADent | BlockKind::BDent => Some((-1, 0)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block kind {0:?} has no partner")]
    NoPartner(BlockKind),
}

/// Complementary kind: bump ↔ dent, slot → tab, tab → left slot.
pub fn partner(kind: BlockKind) -> Result<BlockKind, BlockError> {
    use BlockKind::*;
    Ok(match kind {
        YPlus => YPlusDent,
        YPlusDent => YPlus,
        YMinus => YMinusDent,
        YMinusDent => YMinus,
        XBump => XDent,
        XDent => XBump,
        ABump => ADent,
        ADent => ABump,
        BBump => BDent,
        BDent => BBump,
        SlotLeft | SlotRight => Tab,
        Tab => SlotLeft,
        Functional => return Err(BlockError::NoPartner(kind)),
    })
}

/// Where a tab sits inside its block frame: over the left or right slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TabAnchor {
    Left,
    Right,
}

impl TabAnchor {
    /// Unit offset of the tab's bounding box within a block frame.
    pub fn offset(self) -> Vec2 {
        match self {
            TabAnchor::Left => Vec2::new(1, 0),
            TabAnchor::Right => Vec2::new(6, 0),
        }
    }

    pub fn slot(self) -> BlockKind {
        match self {
            TabAnchor::Left => BlockKind::SlotLeft,
            TabAnchor::Right => BlockKind::SlotRight,
        }
    }

    pub fn for_slot(kind: BlockKind) -> Option<TabAnchor> {
        match kind {
            BlockKind::SlotLeft => Some(TabAnchor::Left),
            BlockKind::SlotRight => Some(TabAnchor::Right),
            _ => None,
        }
    }
}

/// Cells of one block relative to its frame's southwest corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGeometry {
    /// Cells inside the frame `[0,10)²`.
    pub base: CellSet,
    /// Bump cells outside the frame.
    pub protrusion: CellSet,
}

impl BlockGeometry {
    pub fn cells(&self) -> CellSet {
        self.base.union(&self.protrusion)
    }
}

// Polygon transcriptions of the drawn shapes, in units, block at the origin.
const L_SLOT: &[(i64, i64)] = &[
    (1, 0),
    (1, 10),
    (2, 10),
    (2, 9),
    (4, 9),
    (4, 6),
    (3, 6),
    (3, 8),
    (2, 8),
    (2, 2),
    (3, 2),
    (3, 4),
    (4, 4),
    (4, 1),
    (2, 1),
    (2, 0),
];
const Y_PLUS_BUMP: &[(i64, i64)] = &[
    (4, 10),
    (4, 13),
    (2, 13),
    (2, 12),
    (3, 12),
    (3, 11),
    (1, 11),
    (1, 14),
    (5, 14),
    (5, 10),
];
const Y_MINUS_BUMP: &[(i64, i64)] = &[
    (4, 0),
    (4, -3),
    (2, -3),
    (2, -2),
    (3, -2),
    (3, -1),
    (1, -1),
    (1, -4),
    (5, -4),
    (5, 0),
];
const X_BUMP: &[(i64, i64)] = &[(10, 9), (12, 9), (12, 1), (11, 1), (11, 8), (10, 8)];
const A_BUMP: &[(i64, i64)] = &[
    (10, 9),
    (14, 9),
    (14, 6),
    (12, 6),
    (12, 1),
    (11, 1),
    (11, 7),
    (13, 7),
    (13, 8),
    (10, 8),
];
const B_BUMP: &[(i64, i64)] = &[
    (10, 9),
    (14, 9),
    (14, 2),
    (12, 2),
    (12, 1),
    (11, 1),
    (11, 7),
    (12, 7),
    (12, 3),
    (13, 3),
    (13, 8),
    (10, 8),
];

fn raster(points: &[(i64, i64)]) -> CellSet {
    let poly = RectilinearPolygon::from_points(points).expect("catalog polygon is valid");
    rasterize(&poly)
}

struct Catalog {
    entries: Vec<(BlockKind, BlockGeometry, CellSet)>,
}

static CATALOG: LazyLock<Catalog> = LazyLock::new(|| {
    let square = CellSet::rect(0, 0, BLOCK, BLOCK);
    let l_slot = raster(L_SLOT);
    let r_slot = translate(&l_slot, Vec2::new(5, 0));
    let y_plus = raster(Y_PLUS_BUMP);
    let y_minus = raster(Y_MINUS_BUMP);
    let x_bump = raster(X_BUMP);
    let a_bump = raster(A_BUMP);
    let b_bump = raster(B_BUMP);

    let plain = |base: CellSet| BlockGeometry {
        base,
        protrusion: CellSet::new(),
    };
    let bump = |p: &CellSet| BlockGeometry {
        base: square.clone(),
        protrusion: p.clone(),
    };
    // A dent is the partner's bump pulled back into this frame.
    let dent = |p: &CellSet, toward: Vec2| plain(square.difference(&translate(p, toward)));
    let west = Vec2::new(-BLOCK, 0);

    use BlockKind::*;
    let entries = vec![
        (Functional, plain(square.clone())),
        (SlotLeft, plain(square.difference(&l_slot))),
        (SlotRight, plain(square.difference(&r_slot))),
        (Tab, plain(translate(&l_slot, -TabAnchor::Left.offset()))),
        (YPlus, bump(&y_plus)),
        (YPlusDent, dent(&y_plus, Vec2::new(0, -BLOCK))),
        (YMinus, bump(&y_minus)),
        (YMinusDent, dent(&y_minus, Vec2::new(0, BLOCK))),
        (XBump, bump(&x_bump)),
        (XDent, dent(&x_bump, west)),
        (ABump, bump(&a_bump)),
        (ADent, dent(&a_bump, west)),
        (BBump, bump(&b_bump)),
        (BDent, dent(&b_bump, west)),
    ];
    let entries = entries
        .into_iter()
        .map(|(k, g)| {
            let all = g.cells();
            (k, g, all)
        })
        .collect();
    Catalog { entries }
});

fn entry(kind: BlockKind) -> &'static (BlockKind, BlockGeometry, CellSet) {
    // ALL lists kinds in declaration order, matching the catalog
    &CATALOG.entries[kind as usize]
}

pub fn block_geometry(kind: BlockKind) -> &'static BlockGeometry {
    &entry(kind).1
}

/// All cells of a block (base and protrusion). The tab is returned with its
/// bounding box at the origin; place it with [`TabAnchor::offset`].
pub fn block_cells(kind: BlockKind) -> &'static CellSet {
    &entry(kind).2
}

/// The block frame a kind occupies, if any (the free tab has none).
fn frame(kind: BlockKind) -> CellSet {
    if kind == BlockKind::Tab {
        CellSet::new()
    } else {
        CellSet::rect(0, 0, BLOCK, BLOCK)
    }
}

/// Offset at which `partner(kind)` is placed against `kind` so they interlock.
pub fn canonical_offset(kind: BlockKind) -> Option<Vec2> {
    match kind {
        BlockKind::YPlus => Some(Vec2::new(0, BLOCK)),
        BlockKind::YMinus => Some(Vec2::new(0, -BLOCK)),
        BlockKind::XBump | BlockKind::ABump | BlockKind::BBump => Some(Vec2::new(BLOCK, 0)),
        BlockKind::SlotLeft => Some(TabAnchor::Left.offset()),
        BlockKind::SlotRight => Some(TabAnchor::Right.offset()),
        _ => None,
    }
}

/// True iff `first` and `second` shifted by `offset` are disjoint and
/// together fill exactly the union of their block frames.
pub fn complement_check(first: BlockKind, second: BlockKind, offset: Vec2) -> bool {
    let a = block_cells(first);
    let b = translate(block_cells(second), offset);
    if !a.is_disjoint(&b) {
        return false;
    }
    let expected = frame(first).union(&translate(&frame(second), offset));
    a.union(&b) == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_connected;
    use BlockKind::*;

    #[test]
    fn catalog_order_matches_kinds() {
        for (i, k) in BlockKind::ALL.into_iter().enumerate() {
            assert_eq!(CATALOG.entries[i].0, k);
        }
    }

    #[test]
    fn cardinalities() {
        let table = [
            (Functional, 100),
            (SlotLeft, 82),
            (SlotRight, 82),
            (Tab, 18),
            (YPlus, 110),
            (YMinus, 110),
            (YPlusDent, 90),
            (YMinusDent, 90),
            (XBump, 109),
            (XDent, 91),
            (ABump, 113),
            (ADent, 87),
            (BBump, 117),
            (BDent, 83),
        ];
        for (k, n) in table {
            assert_eq!(block_cells(k).len(), n, "{k:?}");
        }
        assert_eq!(block_geometry(BBump).protrusion.len(), 17);
    }

    #[test]
    fn geometry_invariants() {
        let square = CellSet::rect(0, 0, BLOCK, BLOCK);
        for k in BlockKind::ALL {
            let g = block_geometry(k);
            assert!(g.base.is_subset(&square), "{k:?}");
            assert!(g.protrusion.is_disjoint(&square), "{k:?}");
            assert_eq!(is_connected(&g.cells()), !k.is_slot(), "{k:?}");
        }
    }

    #[test]
    fn partners() {
        assert_eq!(partner(YPlus), Ok(YPlusDent));
        assert_eq!(partner(ABump), Ok(ADent));
        assert_eq!(partner(SlotRight), Ok(Tab));
        assert_eq!(partner(Functional), Err(BlockError::NoPartner(Functional)));
        for b in BlockKind::BUMPS {
            assert_eq!(partner(partner(b).unwrap()), Ok(b));
        }
    }

    #[test]
    fn matched_pairs_interlock() {
        for b in BlockKind::BUMPS.into_iter().chain([SlotLeft, SlotRight]) {
            let off = canonical_offset(b).unwrap();
            assert!(complement_check(b, partner(b).unwrap(), off), "{b:?}");
        }
        assert!(complement_check(YPlus, YPlusDent, Vec2::new(0, 10)));
        let u = block_cells(YPlus).union(&translate(block_cells(YPlusDent), Vec2::new(0, 10)));
        assert_eq!(u, CellSet::rect(0, 0, 10, 20));
    }

    #[test]
    fn mismatched_pairs_fail_at_every_adjacent_offset() {
        let offsets = [(10, 0), (-10, 0), (0, 10), (0, -10)].map(|(x, y)| Vec2::new(x, y));
        for b in BlockKind::BUMPS {
            for d in BlockKind::DENTS {
                if partner(b) == Ok(d) {
                    continue;
                }
                for off in offsets {
                    assert!(!complement_check(b, d, off), "{b:?} {d:?} {off:?}");
                }
            }
        }
        assert!(!complement_check(ABump, BDent, Vec2::new(10, 0)));
        assert!(!complement_check(SlotLeft, Tab, TabAnchor::Right.offset()));
        assert!(!complement_check(SlotRight, Tab, TabAnchor::Left.offset()));
    }

    #[test]
    fn bump_shapes_are_distinct_up_to_translation() {
        let shapes: Vec<CellSet> = [XBump, ABump, BBump]
            .iter()
            .map(|&k| block_geometry(k).protrusion.normalized().0)
            .collect();
        assert_ne!(shapes[0], shapes[1]);
        assert_ne!(shapes[0], shapes[2]);
        assert_ne!(shapes[1], shapes[2]);
    }

    #[test]
    fn tab_is_vertically_symmetric() {
        let tab = block_cells(Tab);
        let bb = tab.bounding_box().unwrap();
        let mirrored: CellSet = tab
            .iter()
            .map(|c| crate::geometry::Cell::new(c.x, bb.min_y + bb.max_y - 1 - c.y))
            .collect();
        assert_eq!(&mirrored, tab);
    }

    #[test]
    fn right_slot_is_left_slot_shifted() {
        let square = CellSet::rect(0, 0, BLOCK, BLOCK);
        let l_hole = square.difference(block_cells(SlotLeft));
        let r_hole = square.difference(block_cells(SlotRight));
        assert_eq!(translate(&l_hole, Vec2::new(5, 0)), r_hole);
        assert_eq!(
            translate(block_cells(Tab), TabAnchor::Left.offset()),
            l_hole
        );
    }
}

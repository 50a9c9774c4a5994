//! Compiles a Wang tile set into the seven pieces: encoder, L-linker,
//! R-linker, A-filler, B-filler, connector and T-filler.
//!
//! Pieces are first laid out as block grids (one [`BlockKind`] per 10×10
//! frame) and then assembled into unit cells. A piece's cells are stored
//! with its block grid origin at `(0, 0)`; placements translate those cells
//! as-is.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{block_cells, partner, BlockKind, TabAnchor, BLOCK};
use crate::geometry::{is_connected, Cell, CellSet, GeometryError, Polyomino, Vec2};
use crate::wang::WangTileSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("colour index {index} does not fit in {t} bits")]
    Encoding { index: usize, t: usize },
    #[error("block ({col}, {row}) is outside the {width}×{height} encoder")]
    OutOfRange {
        col: i64,
        row: i64,
        width: i64,
        height: i64,
    },
    #[error("cell {0} is covered by two blocks")]
    Overlap(Cell),
    #[error("bump of block {at:?} enters block {neighbor:?} which has no matching dent")]
    UnmatchedBump {
        at: (i64, i64),
        neighbor: (i64, i64),
    },
    #[error("dent of block {at:?} faces block {neighbor:?} which does not fill it")]
    UncancelledDent {
        at: (i64, i64),
        neighbor: (i64, i64),
    },
    #[error("need at least 2 tiles and 2 colours, got n = {n}, m = {m}")]
    Unsupported { n: usize, m: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One occupied frame of a block grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridBlock {
    pub kind: BlockKind,
    /// Only meaningful for [`BlockKind::Tab`].
    pub anchor: TabAnchor,
}

/// Level-2 layout: block kinds keyed by `(col, row)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockGrid {
    blocks: BTreeMap<(i64, i64), GridBlock>,
}

impl BlockGrid {
    pub fn new() -> Self {
        BlockGrid::default()
    }

    pub fn set(&mut self, col: i64, row: i64, kind: BlockKind) {
        self.blocks.insert(
            (col, row),
            GridBlock {
                kind,
                anchor: TabAnchor::Left,
            },
        );
    }

    pub fn set_tab(&mut self, col: i64, row: i64, anchor: TabAnchor) {
        self.blocks.insert(
            (col, row),
            GridBlock {
                kind: BlockKind::Tab,
                anchor,
            },
        );
    }

    pub fn get(&self, col: i64, row: i64) -> Option<BlockKind> {
        self.blocks.get(&(col, row)).map(|b| b.kind)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), GridBlock)> + '_ {
        self.blocks.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Copies every block of `other` shifted by `(dc, dr)`.
    pub fn paste(&mut self, other: &BlockGrid, dc: i64, dr: i64) {
        for ((c, r), b) in other.iter() {
            self.blocks.insert((c + dc, r + dr), b);
        }
    }

    /// Extent in blocks: `(min_col, min_row, max_col, max_row)` inclusive.
    pub fn extent(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.blocks.keys();
        let &(c0, r0) = it.next()?;
        Some(it.fold((c0, r0, c0, r0), |(a, b, c, d), &(x, y)| {
            (a.min(x), b.min(y), c.max(x), d.max(y))
        }))
    }
}

impl fmt::Display for BlockGrid {
    /// One text row per block row, north at the top.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((c0, r0, c1, r1)) = self.extent() else {
            return Ok(());
        };
        for row in (r0..=r1).rev() {
            let line: Vec<String> = (c0..=c1)
                .map(|col| match self.blocks.get(&(col, row)) {
                    Some(b) => format!("{:>2}", b.kind.label()),
                    None => "  ".to_string(),
                })
                .collect();
            writeln!(f, "{}", line.join(" ").trim_end())?;
        }
        Ok(())
    }
}

/// Realizes a block grid as unit cells.
///
/// Every bump entering an occupied frame must meet the matching dent, and
/// every dent facing an occupied frame must be filled by the matching bump.
pub fn assemble(grid: &BlockGrid) -> Result<CellSet, CompileError> {
    for ((col, row), b) in grid.iter() {
        if let Some((dc, dr)) = b.kind.bump_direction() {
            let nb = (col + dc, row + dr);
            if let Some(k) = grid.get(nb.0, nb.1) {
                if Ok(k) != partner(b.kind) {
                    return Err(CompileError::UnmatchedBump {
                        at: (col, row),
                        neighbor: nb,
                    });
                }
            }
        }
        if let Some((dc, dr)) = b.kind.dent_direction() {
            let nb = (col + dc, row + dr);
            if let Some(k) = grid.get(nb.0, nb.1) {
                if Ok(k) != partner(b.kind) {
                    return Err(CompileError::UncancelledDent {
                        at: (col, row),
                        neighbor: nb,
                    });
                }
            }
        }
    }
    let mut cells = CellSet::new();
    for ((col, row), b) in grid.iter() {
        let mut origin = Vec2::new(col * BLOCK, row * BLOCK);
        if b.kind == BlockKind::Tab {
            origin = origin + b.anchor.offset();
        }
        for c in block_cells(b.kind).iter().map(|c| c.shifted(origin)) {
            if !cells.insert(c) {
                return Err(CompileError::Overlap(c));
            }
        }
    }
    Ok(cells)
}

fn assemble_piece(name: &str, grid: &BlockGrid) -> Result<Polyomino, CompileError> {
    let cells = assemble(grid)?;
    debug_assert!(is_connected(&cells), "{name} is disconnected");
    Ok(Polyomino::new(name, cells)?)
}

/// Binary code of a colour, most significant bit first: 0 → `l`, 1 → `r`.
pub fn encode_color(index: usize, t: usize) -> Result<Vec<BlockKind>, CompileError> {
    if t < usize::BITS as usize && index >= 1 << t {
        return Err(CompileError::Encoding { index, t });
    }
    Ok((0..t)
        .rev()
        .map(|bit| {
            if (index >> bit) & 1 == 1 {
                BlockKind::SlotRight
            } else {
                BlockKind::SlotLeft
            }
        })
        .collect())
}

/// Shape parameters of the encoder: `2t + 1` segments of `2n × 3` blocks,
/// left encoding segments `0..t`, the structural segment `t`, and right
/// encoding segments `t+1..=2t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderLayout {
    pub n: usize,
    pub t: usize,
}

impl EncoderLayout {
    pub fn new(n: usize, t: usize) -> Self {
        EncoderLayout { n, t }
    }

    pub fn segment_width(&self) -> i64 {
        2 * self.n as i64
    }

    pub fn width(&self) -> i64 {
        self.segment_width() * (2 * self.t as i64 + 1)
    }

    pub fn height(&self) -> i64 {
        3
    }

    pub fn segment_of(&self, col: i64) -> usize {
        (col / self.segment_width()) as usize
    }

    pub fn is_structural(&self, col: i64) -> bool {
        self.segment_of(col) == self.t
    }

    /// Column carrying bit `bit` (0-based, MSB first) of tile `tile`
    /// (0-based) on the left or right half.
    pub fn bit_column(&self, tile: usize, bit: usize, right: bool) -> i64 {
        let segment = if right { self.t + 1 + bit } else { bit };
        self.segment_width() * segment as i64 + 2 * tile as i64
    }
}

/// The block at `(col, row)` of the encoder for `set`.
pub fn encoder_block_at(set: &WangTileSet, col: i64, row: i64) -> Result<BlockKind, CompileError> {
    let layout = EncoderLayout::new(set.tile_count(), set.bit_width());
    let (width, height) = (layout.width(), layout.height());
    if !(0..width).contains(&col) || !(0..height).contains(&row) {
        return Err(CompileError::OutOfRange {
            col,
            row,
            width,
            height,
        });
    }
    if row == 1 {
        return Ok(match col {
            0 => BlockKind::ADent,
            c if c == width - 1 => BlockKind::BBump,
            _ => BlockKind::Functional,
        });
    }
    if col % 2 == 1 {
        return Ok(if row == 0 {
            BlockKind::YMinus
        } else {
            BlockKind::YPlus
        });
    }
    let t = layout.t;
    let segment = layout.segment_of(col);
    if segment == t {
        return Ok(BlockKind::Functional);
    }
    let tile = set.tiles()[((col % layout.segment_width()) / 2) as usize];
    let (right, bit) = if segment < t {
        (false, segment)
    } else {
        (true, segment - t - 1)
    };
    let color = match (right, row) {
        (false, 2) => tile.west,
        (false, _) => tile.south,
        (true, 2) => tile.north,
        (true, _) => tile.east,
    };
    Ok(encode_color(color, t)?[bit])
}

pub fn encoder_grid(set: &WangTileSet) -> Result<BlockGrid, CompileError> {
    let layout = EncoderLayout::new(set.tile_count(), set.bit_width());
    let mut g = BlockGrid::new();
    for row in 0..layout.height() {
        for col in 0..layout.width() {
            g.set(col, row, encoder_block_at(set, col, row)?);
        }
    }
    Ok(g)
}

/// Linker body without tabs: `2n × 3` blocks.
pub fn linker_body(n: usize) -> BlockGrid {
    let w = 2 * n as i64;
    let mut g = BlockGrid::new();
    for col in 0..w {
        let odd = col % 2 == 1;
        g.set(
            col,
            0,
            if odd {
                BlockKind::YPlusDent
            } else {
                BlockKind::Functional
            },
        );
        g.set(
            col,
            2,
            if odd {
                BlockKind::YMinusDent
            } else {
                BlockKind::Functional
            },
        );
        let mid = match col {
            0 => BlockKind::XDent,
            c if c == w - 1 => BlockKind::XBump,
            _ => BlockKind::Functional,
        };
        g.set(col, 1, mid);
    }
    g
}

/// Linker: body plus tabs directly below and above column 0.
pub fn linker_grid(n: usize, anchor: TabAnchor) -> BlockGrid {
    let mut g = linker_body(n);
    g.set_tab(0, -1, anchor);
    g.set_tab(0, 3, anchor);
    g
}

/// `2 × 3` filler; `west_dent`/`east_bump` select A, B or the mixed variant.
pub fn filler_grid(west_dent: BlockKind, east_bump: BlockKind) -> BlockGrid {
    let mut g = BlockGrid::new();
    g.set(0, 0, BlockKind::Functional);
    g.set(0, 1, west_dent);
    g.set(0, 2, BlockKind::Functional);
    g.set(1, 0, BlockKind::YMinus);
    g.set(1, 1, east_bump);
    g.set(1, 2, BlockKind::YPlus);
    g
}

/// Two linker bodies joined by the mixed filler, all flush left.
pub fn connector_grid(n: usize) -> BlockGrid {
    let mut g = BlockGrid::new();
    g.paste(&linker_body(n), 0, 0);
    g.paste(&filler_grid(BlockKind::BDent, BlockKind::ABump), 0, 3);
    g.paste(&linker_body(n), 0, 6);
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceKind {
    Encoder,
    LLinker,
    RLinker,
    AFiller,
    BFiller,
    Connector,
    TFiller,
}

impl PieceKind {
    pub const ALL: [PieceKind; 7] = [
        PieceKind::Encoder,
        PieceKind::LLinker,
        PieceKind::RLinker,
        PieceKind::AFiller,
        PieceKind::BFiller,
        PieceKind::Connector,
        PieceKind::TFiller,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Encoder => "encoder",
            PieceKind::LLinker => "L-linker",
            PieceKind::RLinker => "R-linker",
            PieceKind::AFiller => "A-filler",
            PieceKind::BFiller => "B-filler",
            PieceKind::Connector => "connector",
            PieceKind::TFiller => "T-filler",
        }
    }

    pub fn from_name(name: &str) -> Option<PieceKind> {
        PieceKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// The compiled pieces together with the tile set they encode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SevenPieceSet {
    pub source: WangTileSet,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pieces: Vec<Polyomino>,
}

impl SevenPieceSet {
    /// Reassembles a set from stored pieces, e.g. after reading a file.
    pub fn from_parts(source: WangTileSet, pieces: Vec<Polyomino>) -> Option<Self> {
        let names_match = pieces.len() == 7
            && pieces
                .iter()
                .zip(PieceKind::ALL)
                .all(|(p, k)| p.name() == k.name());
        names_match.then(|| SevenPieceSet {
            n: source.tile_count(),
            m: source.color_count(),
            t: source.bit_width(),
            source,
            pieces,
        })
    }

    pub fn get(&self, kind: PieceKind) -> &Polyomino {
        &self.pieces[kind.index()]
    }

    pub fn pieces(&self) -> &[Polyomino] {
        &self.pieces
    }

    pub fn layout(&self) -> EncoderLayout {
        EncoderLayout::new(self.n, self.t)
    }

    /// Cell counts in piece order.
    pub fn areas(&self) -> [usize; 7] {
        std::array::from_fn(|i| self.pieces[i].area())
    }
}

/// Block grid of every piece, in piece order.
pub fn piece_grids(set: &WangTileSet) -> Result<Vec<(PieceKind, BlockGrid)>, CompileError> {
    let (n, m) = (set.tile_count(), set.color_count());
    if n < 2 || m < 2 {
        return Err(CompileError::Unsupported { n, m });
    }
    let mut tab = BlockGrid::new();
    tab.set_tab(0, 0, TabAnchor::Left);
    Ok(vec![
        (PieceKind::Encoder, encoder_grid(set)?),
        (PieceKind::LLinker, linker_grid(n, TabAnchor::Left)),
        (PieceKind::RLinker, linker_grid(n, TabAnchor::Right)),
        (
            PieceKind::AFiller,
            filler_grid(BlockKind::ADent, BlockKind::ABump),
        ),
        (
            PieceKind::BFiller,
            filler_grid(BlockKind::BDent, BlockKind::BBump),
        ),
        (PieceKind::Connector, connector_grid(n)),
        (PieceKind::TFiller, tab),
    ])
}

pub fn compile(set: &WangTileSet) -> Result<SevenPieceSet, CompileError> {
    let mut pieces = Vec::with_capacity(7);
    for (kind, grid) in piece_grids(set)? {
        let mut piece = assemble_piece(kind.name(), &grid)?;
        if kind == PieceKind::TFiller {
            // the free tab is stored with its bounding box at the origin
            let (cells, _) = piece.cells().normalized();
            piece = Polyomino::new(kind.name(), cells)?;
        }
        pieces.push(piece);
    }
    Ok(SevenPieceSet {
        source: set.clone(),
        n: set.tile_count(),
        m: set.color_count(),
        t: set.bit_width(),
        pieces,
    })
}

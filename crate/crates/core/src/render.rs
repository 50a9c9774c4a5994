//! SVG and ASCII pictures of pieces and tilings.
//!
//! Each piece or placement becomes one `<path>` tracing the boundary of its
//! cells (holes included, filled even-odd). Stored data is y-north; the
//! flip to SVG's downward y happens here only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geometry::{translate, BoundingBox, Cell, CellSet, Polyomino, Vec2};
use crate::solver::{Placement, Region};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("nothing to draw")]
    Empty,
    #[error("placement refers to unknown piece `{0}`")]
    UnknownPiece(String),
}

/// Fill colours by piece position, cycling.
pub const PALETTE: [&str; 7] = [
    "#7b3fa0", "#f08c1e", "#2f6fc0", "#3a9e4a", "#c8b400", "#d0413a", "#8a8a8a",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    /// Output units per cell.
    pub cell_size: u32,
    /// Faint lines along the 10-cell block grid.
    pub grid: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell_size: 2,
            grid: false,
        }
    }
}

/// Closed boundary loops of a cell set as vertex lists, outer boundaries
/// counter-clockwise and holes clockwise; collinear vertices are dropped.
pub fn outline(cells: &CellSet) -> Vec<Vec<Vec2>> {
    // directed unit edges with the cell on the left, keyed by start point
    let mut edges: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
    let mut add = |from: (i64, i64), to: (i64, i64)| edges.entry(from).or_default().push(to);
    for c in cells.iter() {
        let (x, y) = (c.x, c.y);
        if !cells.contains(Cell::new(x, y - 1)) {
            add((x, y), (x + 1, y));
        }
        if !cells.contains(Cell::new(x + 1, y)) {
            add((x + 1, y), (x + 1, y + 1));
        }
        if !cells.contains(Cell::new(x, y + 1)) {
            add((x + 1, y + 1), (x, y + 1));
        }
        if !cells.contains(Cell::new(x - 1, y)) {
            add((x, y + 1), (x, y));
        }
    }
    let mut loops = Vec::new();
    while let Some((&start, _)) = edges.iter().next() {
        let mut pts = vec![start];
        let mut at = start;
        loop {
            let outs = edges
                .get_mut(&at)
                .expect("boundary edges form closed loops");
            let next = outs.remove(0);
            if outs.is_empty() {
                edges.remove(&at);
            }
            at = next;
            if at == start {
                break;
            }
            pts.push(at);
        }
        loops.push(simplify(&pts));
    }
    loops
}

fn simplify(pts: &[(i64, i64)]) -> Vec<Vec2> {
    let n = pts.len();
    (0..n)
        .filter(|&i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            (b.0 - a.0) * (c.1 - b.1) != (b.1 - a.1) * (c.0 - b.0)
        })
        .map(|i| Vec2::new(pts[i].0, pts[i].1))
        .collect()
}

/// Sum of signed loop areas; equals the cell count for any traced outline.
pub fn outline_area(loops: &[Vec<Vec2>]) -> i64 {
    loops
        .iter()
        .map(|l| crate::geometry::shoelace(l))
        .sum::<i64>()
        / 2
}

struct Canvas {
    bbox: BoundingBox,
    scale: i64,
    body: String,
}

impl Canvas {
    fn new(bbox: BoundingBox, spec: &RenderSpec) -> Self {
        Canvas {
            bbox,
            scale: spec.cell_size.max(1) as i64,
            body: String::new(),
        }
    }

    fn point(&self, v: Vec2) -> (i64, i64) {
        (
            (v.x - self.bbox.min_x) * self.scale,
            (self.bbox.max_y - v.y) * self.scale,
        )
    }

    fn path(&mut self, cells: &CellSet, fill: &str, title: &str) {
        let mut d = String::new();
        for lp in outline(cells) {
            for (i, &v) in lp.iter().enumerate() {
                let (x, y) = self.point(v);
                let _ = write!(d, "{}{x} {y}", if i == 0 { "M" } else { "L" });
            }
            d.push('Z');
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="{fill}" fill-rule="evenodd" stroke="black" stroke-width="0.5"><title>{title}</title></path>"#
        );
    }

    fn grid(&mut self) {
        let b = self.bbox;
        let mut d = String::new();
        for x in (b.min_x..=b.max_x).filter(|x| x.rem_euclid(10) == 0) {
            let (px, top) = self.point(Vec2::new(x, b.max_y));
            let (_, bottom) = self.point(Vec2::new(x, b.min_y));
            let _ = write!(d, "M{px} {top}L{px} {bottom}");
        }
        for y in (b.min_y..=b.max_y).filter(|y| y.rem_euclid(10) == 0) {
            let (left, py) = self.point(Vec2::new(b.min_x, y));
            let (right, _) = self.point(Vec2::new(b.max_x, y));
            let _ = write!(d, "M{left} {py}L{right} {py}");
        }
        let _ = writeln!(
            self.body,
            r##"<path d="{d}" fill="none" stroke="#cccccc" stroke-width="0.25"/>"##
        );
    }

    fn finish(self) -> String {
        let w = self.bbox.width() * self.scale;
        let h = self.bbox.height() * self.scale;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
            self.body
        )
    }
}

fn union_bbox(sets: &[CellSet]) -> Option<BoundingBox> {
    sets.iter()
        .filter_map(|s| s.bounding_box())
        .reduce(|a, b| BoundingBox {
            min_x: a.min_x.min(b.min_x),
            min_y: a.min_y.min(b.min_y),
            max_x: a.max_x.max(b.max_x),
            max_y: a.max_y.max(b.max_y),
        })
}

fn draw(items: &[(CellSet, usize, String)], spec: &RenderSpec) -> Result<String, RenderError> {
    let sets: Vec<CellSet> = items.iter().map(|(c, _, _)| c.clone()).collect();
    let bbox = union_bbox(&sets).ok_or(RenderError::Empty)?;
    let mut canvas = Canvas::new(bbox, spec);
    if spec.grid {
        canvas.grid();
    }
    for (cells, colour, title) in items {
        canvas.path(cells, PALETTE[colour % PALETTE.len()], title);
    }
    Ok(canvas.finish())
}

/// The pieces side by side in a row, bottoms aligned, two cells apart.
pub fn render_pieces(pieces: &[Polyomino], spec: &RenderSpec) -> Result<String, RenderError> {
    let mut items = Vec::new();
    let mut cursor = 0;
    for (i, p) in pieces.iter().enumerate() {
        let (cells, _) = p.cells().normalized();
        let Some(bb) = cells.bounding_box() else {
            continue;
        };
        items.push((
            translate(&cells, Vec2::new(cursor, 0)),
            i,
            p.name().to_string(),
        ));
        cursor += bb.width() + 2;
    }
    draw(&items, spec)
}

/// One path per placement, at the placement's stored offset.
pub fn render_tiling(
    pieces: &[Polyomino],
    placements: &[Placement],
    spec: &RenderSpec,
) -> Result<String, RenderError> {
    let mut items = Vec::with_capacity(placements.len());
    for pl in placements {
        let (i, p) = pieces
            .iter()
            .enumerate()
            .find(|(_, p)| p.name() == pl.piece)
            .ok_or_else(|| RenderError::UnknownPiece(pl.piece.clone()))?;
        items.push((translate(p.cells(), pl.at), i, pl.piece.clone()));
    }
    draw(&items, spec)
}

/// `#` for cells, `.` elsewhere, north on top.
pub fn ascii_cells(cells: &CellSet) -> String {
    let Some(bb) = cells.bounding_box() else {
        return String::new();
    };
    let mut out = String::new();
    for y in (bb.min_y..bb.max_y).rev() {
        for x in bb.min_x..bb.max_x {
            out.push(if cells.contains(Cell::new(x, y)) {
                '#'
            } else {
                '.'
            });
        }
        out.push('\n');
    }
    out
}

/// The region's fundamental domain with each cell labelled by the piece
/// covering it (`A` for the first piece, ...), `.` when uncovered and `*`
/// when covered more than once.
pub fn ascii_tiling(
    region: &Region,
    pieces: &[Polyomino],
    placements: &[Placement],
) -> Result<String, RenderError> {
    let (w, h) = match region {
        Region::Rectangle { width, height } => (*width, *height),
        Region::Torus(l) => l.domain(),
    };
    let mut grid = vec![b'.'; (w * h) as usize];
    for pl in placements {
        let i = pieces
            .iter()
            .position(|p| p.name() == pl.piece)
            .ok_or_else(|| RenderError::UnknownPiece(pl.piece.clone()))?;
        let label = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ"[i % 26];
        for c in pieces[i].cells().iter() {
            if let Some(k) = region.index_of(c.shifted(pl.at)) {
                grid[k] = if grid[k] == b'.' { label } else { b'*' };
            }
        }
    }
    let mut out = String::new();
    for row in grid.chunks(w as usize).rev() {
        out.push_str(std::str::from_utf8(row).expect("ascii"));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{block_cells, BlockKind};
    use crate::compiler::compile;
    use crate::simulate::emit_placements;
    use crate::wang::tests::three_tiles;
    use crate::wang::WangTiling;
    use proptest::prelude::*;

    fn path_count(svg: &str) -> usize {
        svg.matches("</title>").count()
    }

    #[test]
    fn tab_outline() {
        let tab = block_cells(BlockKind::Tab);
        let loops = outline(tab);
        assert_eq!(loops.len(), 1);
        assert_eq!(outline_area(&loops), 18);
        let svg = render_pieces(
            &[Polyomino::new("tab", tab.clone()).unwrap()],
            &RenderSpec::default(),
        )
        .unwrap();
        assert_eq!(path_count(&svg), 1);
    }

    #[test]
    fn slot_block_has_a_hole() {
        let l = block_cells(BlockKind::SlotLeft);
        assert_eq!(outline_area(&outline(l)), 82);
        let ring = CellSet::rect(0, 0, 3, 3).difference(&CellSet::rect(1, 1, 1, 1));
        let loops = outline(&ring);
        assert_eq!(loops.len(), 2);
        assert_eq!(outline_area(&loops), 8);
        assert_eq!(loops[0].len(), 4);
    }

    #[test]
    fn three_tile_pieces_and_tiling() {
        let set = compile(&three_tiles()).unwrap();
        let spec = RenderSpec::default();
        let svg = render_pieces(set.pieces(), &spec).unwrap();
        assert_eq!(path_count(&svg), 7);
        assert_eq!(svg, render_pieces(set.pieces(), &spec).unwrap());
        for p in set.pieces() {
            assert_eq!(outline_area(&outline(p.cells())), p.area() as i64);
        }
        let sim = emit_placements(&three_tiles(), &WangTiling::torus(3, 1, vec![0, 1, 2])).unwrap();
        let svg = render_tiling(
            set.pieces(),
            &sim.placements,
            &RenderSpec {
                cell_size: 1,
                grid: true,
            },
        )
        .unwrap();
        assert_eq!(path_count(&svg), 72);
    }

    #[test]
    fn empty_payload_is_an_error() {
        assert_eq!(
            render_pieces(&[], &RenderSpec::default()),
            Err(RenderError::Empty)
        );
        assert_eq!(
            render_tiling(&[], &[], &RenderSpec::default()),
            Err(RenderError::Empty)
        );
    }

    #[test]
    fn svg_coordinates_flip_y() {
        let p = Polyomino::new("m", CellSet::rect(0, 0, 1, 2)).unwrap();
        let svg = render_pieces(
            &[p],
            &RenderSpec {
                cell_size: 3,
                grid: false,
            },
        )
        .unwrap();
        assert!(svg.contains(r#"width="3" height="6""#));
        assert!(svg.contains(r#"d="M0 6L3 6L3 0L0 0Z""#), "{svg}");
    }

    #[test]
    fn ascii() {
        let cells: CellSet = [Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]
            .into_iter()
            .collect();
        assert_eq!(ascii_cells(&cells), "#.\n##\n");
        let pieces = vec![
            Polyomino::new("h", CellSet::rect(0, 0, 2, 1)).unwrap(),
            Polyomino::new("v", CellSet::rect(0, 0, 1, 2)).unwrap(),
        ];
        let pl = vec![
            Placement::new("v", Vec2::new(0, 0)),
            Placement::new("h", Vec2::new(1, 0)),
            Placement::new("h", Vec2::new(2, 0)),
        ];
        let r = Region::rectangle(3, 2).unwrap();
        assert_eq!(ascii_tiling(&r, &pieces, &pl).unwrap(), "B..\nBA*\n");
    }

    proptest! {
        #[test]
        fn outline_area_matches_cell_count(raw in proptest::collection::btree_set((0i64..6, 0i64..6), 1..25)) {
            let cells: CellSet = raw.into_iter().map(|(x, y)| Cell::new(x, y)).collect();
            prop_assert_eq!(outline_area(&outline(&cells)), cells.len() as i64);
        }
    }
}

//! Wang tiles: edge-coloured unit squares placed by translation, with equal
//! colours required on shared edges.
//!
//! Square coordinates are `(a, b)` with `a` growing east and `b` north.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WangError {
    #[error("tile set is empty")]
    NoTiles,
    #[error("colour `{0}` is listed more than once")]
    DuplicateColor(String),
    #[error("colour `{0}` is used by a tile but missing from the colour list")]
    UnknownColor(String),
    #[error("tiling refers to tile {index} but the set has {n} tiles")]
    TileOutOfRange { index: usize, n: usize },
    #[error("tiling has {got} cells, expected {expected} for {p}×{q}")]
    WrongCellCount {
        got: usize,
        expected: usize,
        p: usize,
        q: usize,
    },
    #[error("tiling dimensions must be positive")]
    EmptyRegion,
}

/// A tile as indices into the set's colour table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WangTile {
    pub north: usize,
    pub east: usize,
    pub south: usize,
    pub west: usize,
}

/// One tile in a set file, colours given by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSpec {
    pub n: String,
    pub e: String,
    pub s: String,
    pub w: String,
}

/// On-disk form of a tile set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WangSetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<String>>,
    pub tiles: Vec<TileSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WangTileSet {
    colors: Vec<String>,
    tiles: Vec<WangTile>,
}

impl WangTileSet {
    /// Builds a set from labelled tiles. Colour indices follow `colors` when
    /// given, otherwise the order of first appearance (N, E, S, W per tile).
    pub fn from_file(file: &WangSetFile) -> Result<Self, WangError> {
        if file.tiles.is_empty() {
            return Err(WangError::NoTiles);
        }
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut colors = Vec::new();
        if let Some(list) = &file.colors {
            for c in list {
                if index.insert(c.clone(), colors.len()).is_some() {
                    return Err(WangError::DuplicateColor(c.clone()));
                }
                colors.push(c.clone());
            }
        }
        let explicit = file.colors.is_some();
        let mut lookup = |label: &str| -> Result<usize, WangError> {
            if let Some(&i) = index.get(label) {
                return Ok(i);
            }
            if explicit {
                return Err(WangError::UnknownColor(label.to_string()));
            }
            colors.push(label.to_string());
            index.insert(label.to_string(), colors.len() - 1);
            Ok(colors.len() - 1)
        };
        let mut tiles = Vec::with_capacity(file.tiles.len());
        for t in &file.tiles {
            tiles.push(WangTile {
                north: lookup(&t.n)?,
                east: lookup(&t.e)?,
                south: lookup(&t.s)?,
                west: lookup(&t.w)?,
            });
        }
        Ok(WangTileSet { colors, tiles })
    }

    /// Builds a set directly from colour indices; colours are labelled `c0`, `c1`, ….
    pub fn from_indices(m: usize, tiles: Vec<WangTile>) -> Result<Self, WangError> {
        if tiles.is_empty() {
            return Err(WangError::NoTiles);
        }
        for t in &tiles {
            for c in [t.north, t.east, t.south, t.west] {
                if c >= m {
                    return Err(WangError::UnknownColor(format!("c{c}")));
                }
            }
        }
        Ok(WangTileSet {
            colors: (0..m).map(|i| format!("c{i}")).collect(),
            tiles,
        })
    }

    /// The file form with an explicit colour list, so indices survive a round trip.
    pub fn to_file(&self) -> WangSetFile {
        let label = |i: usize| self.colors[i].clone();
        WangSetFile {
            colors: Some(self.colors.clone()),
            tiles: self
                .tiles
                .iter()
                .map(|t| TileSpec {
                    n: label(t.north),
                    e: label(t.east),
                    s: label(t.south),
                    w: label(t.west),
                })
                .collect(),
        }
    }

    pub fn tiles(&self) -> &[WangTile] {
        &self.tiles
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Bits needed per colour: `max(1, ⌈log₂ m⌉)`.
    pub fn bit_width(&self) -> usize {
        let m = self.colors.len();
        let mut t = 0;
        while (1usize << t) < m {
            t += 1;
        }
        t.max(1)
    }
}

/// An assignment of tile indices to a `p × q` rectangle or torus; cells are
/// stored row by row, `cells[b * p + a]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WangTiling {
    pub p: usize,
    pub q: usize,
    pub torus: bool,
    pub cells: Vec<usize>,
}

impl WangTiling {
    pub fn torus(p: usize, q: usize, cells: Vec<usize>) -> Self {
        WangTiling {
            p,
            q,
            torus: true,
            cells,
        }
    }

    pub fn tile_at(&self, a: usize, b: usize) -> usize {
        self.cells[b * self.p + a]
    }

    /// Tile at any integer square position, wrapping periodically.
    pub fn tile_at_wrapped(&self, a: i64, b: i64) -> usize {
        let a = a.rem_euclid(self.p as i64) as usize;
        let b = b.rem_euclid(self.q as i64) as usize;
        self.tile_at(a, b)
    }

    /// Repeats a torus tiling `kx × ky` times.
    pub fn unrolled(&self, kx: usize, ky: usize) -> WangTiling {
        let (p, q) = (self.p * kx, self.q * ky);
        let cells = (0..q)
            .flat_map(|b| (0..p).map(move |a| (a, b)))
            .map(|(a, b)| self.tile_at(a % self.p, b % self.q))
            .collect();
        WangTiling {
            p,
            q,
            torus: self.torus,
            cells,
        }
    }

    /// Cyclic shift: the tile at `(a, b)` moves to `(a + da, b + db)`.
    pub fn shifted(&self, da: i64, db: i64) -> WangTiling {
        let cells = (0..self.q as i64)
            .flat_map(|b| (0..self.p as i64).map(move |a| (a, b)))
            .map(|(a, b)| self.tile_at_wrapped(a - da, b - db))
            .collect();
        WangTiling {
            cells,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Adjacency {
    /// `(a, b)` and its east neighbour.
    Horizontal,
    /// `(a, b)` and its north neighbour.
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: Adjacency,
    pub a: usize,
    pub b: usize,
}

/// Lists every shared edge whose two colours differ.
pub fn validate(set: &WangTileSet, tiling: &WangTiling) -> Result<Vec<Violation>, WangError> {
    let (p, q) = (tiling.p, tiling.q);
    if p == 0 || q == 0 {
        return Err(WangError::EmptyRegion);
    }
    if tiling.cells.len() != p * q {
        return Err(WangError::WrongCellCount {
            got: tiling.cells.len(),
            expected: p * q,
            p,
            q,
        });
    }
    let n = set.tile_count();
    if let Some(&index) = tiling.cells.iter().find(|&&i| i >= n) {
        return Err(WangError::TileOutOfRange { index, n });
    }
    let tile = |a: usize, b: usize| set.tiles[tiling.tile_at(a, b)];
    let mut out = Vec::new();
    for b in 0..q {
        for a in 0..p {
            let here = tile(a, b);
            if a + 1 < p || tiling.torus {
                let east = tile((a + 1) % p, b);
                if here.east != east.west {
                    out.push(Violation {
                        kind: Adjacency::Horizontal,
                        a,
                        b,
                    });
                }
            }
            if b + 1 < q || tiling.torus {
                let north = tile(a, (b + 1) % q);
                if here.north != north.south {
                    out.push(Violation {
                        kind: Adjacency::Vertical,
                        a,
                        b,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    First,
    Count,
    Enumerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WangSolutions {
    pub count: u64,
    pub tilings: Vec<WangTiling>,
}

struct TorusSearch<'a> {
    set: &'a WangTileSet,
    p: usize,
    q: usize,
    cells: Vec<usize>,
    mode: SearchMode,
    out: WangSolutions,
}

impl TorusSearch<'_> {
    fn fits(&self, pos: usize, tile: usize) -> bool {
        let (p, q) = (self.p, self.q);
        let (a, b) = (pos % p, pos / p);
        let t = &self.set.tiles[tile];
        let tiles = &self.set.tiles;
        if a > 0 && tiles[self.cells[pos - 1]].east != t.west {
            return false;
        }
        if b > 0 && tiles[self.cells[pos - p]].north != t.south {
            return false;
        }
        // wrap-around constraints close the torus
        if a == p - 1 {
            let first = if a == 0 { t } else { &tiles[self.cells[b * p]] };
            if t.east != first.west {
                return false;
            }
        }
        if b == q - 1 {
            let bottom = if b == 0 { t } else { &tiles[self.cells[a]] };
            if t.north != bottom.south {
                return false;
            }
        }
        true
    }

    fn done(&self) -> bool {
        self.mode == SearchMode::First && self.out.count > 0
    }

    fn run(&mut self, pos: usize) {
        if pos == self.p * self.q {
            self.out.count += 1;
            if self.mode != SearchMode::Count {
                self.out
                    .tilings
                    .push(WangTiling::torus(self.p, self.q, self.cells.clone()));
            }
            return;
        }
        for tile in 0..self.set.tile_count() {
            if self.done() {
                return;
            }
            if self.fits(pos, tile) {
                self.cells[pos] = tile;
                self.run(pos + 1);
            }
        }
    }
}

/// Depth-first search for torus tilings, cells in row-major order and tiles
/// in ascending index order. The first cell's choices are searched in
/// parallel and merged in order, so results never depend on thread count.
pub fn solve_torus(set: &WangTileSet, p: usize, q: usize, mode: SearchMode) -> WangSolutions {
    if p == 0 || q == 0 {
        return WangSolutions::default();
    }
    let branches: Vec<WangSolutions> = (0..set.tile_count())
        .into_par_iter()
        .map(|first| {
            let mut s = TorusSearch {
                set,
                p,
                q,
                cells: vec![0; p * q],
                mode,
                out: WangSolutions::default(),
            };
            if s.fits(0, first) {
                s.cells[0] = first;
                s.run(1);
            }
            s.out
        })
        .collect();
    let mut out = WangSolutions::default();
    for b in branches {
        if mode == SearchMode::First && out.count > 0 {
            break;
        }
        out.count += b.count;
        out.tilings.extend(b.tilings);
    }
    out
}

/// Smallest torus (by area, then width) that the set tiles, searching up to
/// `max_cells` cells.
pub fn find_periodic(set: &WangTileSet, max_cells: usize) -> Option<(usize, usize, WangTiling)> {
    for area in 1..=max_cells {
        for p in (1..=area).filter(|p| area % p == 0) {
            let q = area / p;
            let mut sol = solve_torus(set, p, q, SearchMode::First);
            if let Some(t) = sol.tilings.pop() {
                return Some((p, q, t));
            }
        }
    }
    None
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn spec(n: &str, e: &str, s: &str, w: &str) -> TileSpec {
        TileSpec {
            n: n.into(),
            e: e.into(),
            s: s.into(),
            w: w.into(),
        }
    }

    pub(crate) fn three_tiles() -> WangTileSet {
        WangTileSet::from_file(&WangSetFile {
            colors: Some(vec![
                "red".into(),
                "green".into(),
                "yellow".into(),
                "blue".into(),
            ]),
            tiles: vec![
                spec("red", "yellow", "red", "green"),
                spec("blue", "red", "blue", "yellow"),
                spec("yellow", "green", "yellow", "red"),
            ],
        })
        .unwrap()
    }

    fn single(n: &str, e: &str, s: &str, w: &str) -> WangTileSet {
        WangTileSet::from_file(&WangSetFile {
            colors: None,
            tiles: vec![spec(n, e, s, w)],
        })
        .unwrap()
    }

    /// Exhaustive oracle: tries every assignment.
    fn brute_count(set: &WangTileSet, p: usize, q: usize) -> u64 {
        let n = set.tile_count();
        let total = n.pow((p * q) as u32);
        (0..total)
            .filter(|&code| {
                let mut c = code;
                let cells = (0..p * q)
                    .map(|_| {
                        let t = c % n;
                        c /= n;
                        t
                    })
                    .collect();
                validate(set, &WangTiling::torus(p, q, cells))
                    .unwrap()
                    .is_empty()
            })
            .count() as u64
    }

    #[test]
    fn colour_indices() {
        let set = three_tiles();
        assert_eq!(set.color_count(), 4);
        assert_eq!(set.bit_width(), 2);
        assert_eq!(set.tiles()[0].west, 1);
        let implicit = WangTileSet::from_file(&WangSetFile {
            colors: None,
            tiles: vec![spec("red", "yellow", "red", "green")],
        })
        .unwrap();
        assert_eq!(implicit.colors(), ["red", "yellow", "green"]);
        assert_eq!(single("a", "a", "a", "a").bit_width(), 1);
    }

    #[test]
    fn bad_sets() {
        let dup = WangSetFile {
            colors: Some(vec!["a".into(), "a".into()]),
            tiles: vec![spec("a", "a", "a", "a")],
        };
        assert_eq!(
            WangTileSet::from_file(&dup),
            Err(WangError::DuplicateColor("a".into()))
        );
        let unknown = WangSetFile {
            colors: Some(vec!["a".into()]),
            tiles: vec![spec("a", "b", "a", "a")],
        };
        assert_eq!(
            WangTileSet::from_file(&unknown),
            Err(WangError::UnknownColor("b".into()))
        );
        let empty = WangSetFile {
            colors: None,
            tiles: vec![],
        };
        assert_eq!(WangTileSet::from_file(&empty), Err(WangError::NoTiles));
    }

    #[test]
    fn validate_examples() {
        let set = three_tiles();
        let row = WangTiling::torus(3, 1, vec![0, 1, 2]);
        assert!(validate(&set, &row).unwrap().is_empty());
        assert_eq!(brute_count(&set, 3, 1), 3);

        let same = single("a", "a", "a", "a");
        assert!(validate(&same, &WangTiling::torus(1, 1, vec![0]))
            .unwrap()
            .is_empty());

        let ns = single("a", "b", "c", "b");
        let v = validate(&ns, &WangTiling::torus(1, 1, vec![0])).unwrap();
        assert_eq!(
            v,
            vec![Violation {
                kind: Adjacency::Vertical,
                a: 0,
                b: 0
            }]
        );

        assert_eq!(
            validate(&set, &WangTiling::torus(1, 1, vec![3])),
            Err(WangError::TileOutOfRange { index: 3, n: 3 })
        );
    }

    #[test]
    fn rectangle_does_not_wrap() {
        let set = three_tiles();
        let t = WangTiling {
            p: 2,
            q: 1,
            torus: false,
            cells: vec![0, 1],
        };
        assert!(validate(&set, &t).unwrap().is_empty());
        let wrapped = WangTiling { torus: true, ..t };
        assert_eq!(validate(&set, &wrapped).unwrap().len(), 1);
    }

    #[test]
    fn torus_search_examples() {
        let set = three_tiles();
        let first = solve_torus(&set, 3, 1, SearchMode::First);
        assert_eq!(first.tilings, vec![WangTiling::torus(3, 1, vec![0, 1, 2])]);
        assert_eq!(solve_torus(&set, 3, 1, SearchMode::Count).count, 3);
        let all = solve_torus(&set, 3, 1, SearchMode::Enumerate);
        assert_eq!(
            all.tilings
                .iter()
                .map(|t| t.cells.clone())
                .collect::<Vec<_>>(),
            vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]
        );
        assert_eq!(solve_torus(&set, 1, 1, SearchMode::Count).count, 0);
        assert!(solve_torus(&single("a", "a", "a", "a"), 1, 1, SearchMode::Count).count >= 1);
    }

    #[test]
    fn search_matches_brute_force() {
        let set = three_tiles();
        for (p, q) in [(1, 1), (2, 1), (3, 1), (1, 2), (3, 2), (6, 1), (2, 2)] {
            assert_eq!(
                solve_torus(&set, p, q, SearchMode::Count).count,
                brute_count(&set, p, q),
                "{p}x{q}"
            );
        }
    }

    #[test]
    fn periodic_scan() {
        let (p, q, t) = find_periodic(&three_tiles(), 9).unwrap();
        assert_eq!((p, q), (3, 1));
        assert_eq!(t.cells, vec![0, 1, 2]);
        assert_eq!(find_periodic(&single("a", "a", "a", "a"), 1).unwrap().0, 1);
        assert!(find_periodic(&single("a", "b", "c", "b"), 12).is_none());
    }

    fn random_set() -> impl Strategy<Value = WangTileSet> {
        (1usize..4, 1usize..5).prop_flat_map(|(m, n)| {
            prop::collection::vec((0..m, 0..m, 0..m, 0..m), n).prop_map(move |ts| {
                let tiles = ts
                    .into_iter()
                    .map(|(north, east, south, west)| WangTile {
                        north,
                        east,
                        south,
                        west,
                    })
                    .collect();
                WangTileSet::from_indices(m, tiles).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn solutions_validate_and_invariants_hold(set in random_set(), p in 1usize..4, q in 1usize..3, rot in 0usize..4, perm_seed in 0usize..24) {
            let sols = solve_torus(&set, p, q, SearchMode::Enumerate);
            prop_assert_eq!(sols.count as usize, sols.tilings.len());
            for t in &sols.tilings {
                prop_assert!(validate(&set, t).unwrap().is_empty());
                // p|p', q|q' unrolling stays valid
                prop_assert!(validate(&set, &t.unrolled(2, 3)).unwrap().is_empty());
            }
            prop_assert_eq!(sols.count, brute_count(&set, p, q));

            // cyclic rotation of the tile list
            let n = set.tile_count();
            let rotated: Vec<WangTile> = (0..n).map(|i| set.tiles()[(i + rot) % n]).collect();
            let rotated = WangTileSet::from_indices(set.color_count(), rotated).unwrap();
            prop_assert_eq!(solve_torus(&rotated, p, q, SearchMode::Count).count, sols.count);

            // colour renaming by a permutation of indices
            let m = set.color_count();
            let mut perm: Vec<usize> = (0..m).collect();
            let mut seed = perm_seed;
            for i in (1..m).rev() {
                perm.swap(i, seed % (i + 1));
                seed /= i + 1;
            }
            let renamed: Vec<WangTile> = set.tiles().iter().map(|t| WangTile {
                north: perm[t.north], east: perm[t.east], south: perm[t.south], west: perm[t.west],
            }).collect();
            let renamed = WangTileSet::from_indices(m, renamed).unwrap();
            prop_assert_eq!(solve_torus(&renamed, p, q, SearchMode::Count).count, sols.count);
        }
    }
}

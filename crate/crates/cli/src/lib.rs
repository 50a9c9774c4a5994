//! Command-line surface of the toolkit. `run` executes one parsed command
//! and returns the process exit code; output goes to files or to `out`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use polyreduce::compiler::compile;
use polyreduce::geometry::{is_connected, TorusLattice, Vec2};
use polyreduce::io::{from_json, to_json, PieceSetFile, PolyTilingFile};
use polyreduce::render::{ascii_cells, ascii_tiling, render_pieces, render_tiling, RenderSpec};
use polyreduce::simulate::{emit_placements, linker_alignment_check};
use polyreduce::solver::{check_tiling, solve, PlacementUniverse, Region, SolveMode, SolverError};
use polyreduce::wang::{
    find_periodic, solve_torus, SearchMode, WangSetFile, WangTileSet, WangTiling,
};

pub const THREADS_ENV: &str = "POLYREDUCE_THREADS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "polyreduce",
    version,
    about = "Wang tiles to seven polyominoes, and back-checking"
)]
pub struct Cli {
    /// Worker threads (also read from POLYREDUCE_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: CommandRequest,
}

#[derive(Debug, Subcommand)]
pub enum CommandRequest {
    /// Compile a Wang set file into the seven-piece file.
    Compile {
        wang: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a Wang tiling of a torus.
    SolveWang {
        wang: PathBuf,
        /// Torus size `P Q`.
        #[arg(long, num_args = 2, value_names = ["P", "Q"], conflicts_with = "periodic")]
        torus: Option<Vec<usize>>,
        /// Try every torus with at most this many cells.
        #[arg(long, value_name = "MAX_CELLS")]
        periodic: Option<usize>,
        /// Print the number of tilings instead of one tiling.
        #[arg(long)]
        count: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tile a rectangle or torus with the pieces of a piece file.
    SolvePoly {
        pieces: PathBuf,
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long)]
        count: bool,
        /// Give up after this many search nodes.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a Wang torus tiling into a tiling by the compiled pieces.
    Simulate {
        wang: PathBuf,
        tiling: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a tiling file covers its region exactly once.
    Verify {
        pieces: PathBuf,
        tiling: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a piece file, or a tiling file given its pieces.
    Render {
        input: PathBuf,
        /// Piece file, required when drawing a tiling.
        #[arg(long)]
        pieces: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        cell_size: u32,
        #[arg(long)]
        grid: bool,
        /// Text output instead of SVG.
        #[arg(long)]
        ascii: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cell counts, bounding boxes and connectivity of a piece file.
    Info { pieces: PathBuf },
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct RegionArgs {
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    pub rect: Option<Vec<i64>>,
    /// Lattice basis `X1 Y1 X2 Y2`.
    #[arg(long, num_args = 4, value_names = ["X1", "Y1", "X2", "Y2"], allow_hyphen_values = true)]
    pub lattice: Option<Vec<i64>>,
}

impl RegionArgs {
    fn region(&self) -> Result<Region> {
        Ok(match (&self.rect, &self.lattice) {
            (Some(r), _) => Region::rectangle(r[0], r[1])?,
            (_, Some(l)) => Region::Torus(TorusLattice::new(
                Vec2::new(l[0], l[1]),
                Vec2::new(l[2], l[3]),
            )?),
            _ => bail!("give --rect or --lattice"),
        })
    }
}

/// Thread count from the flag, else the environment.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .with_context(|| format!("{THREADS_ENV}={v}"))?,
        )),
        Err(_) => Ok(None),
    }
}

/// Maps an error to its exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<SolverError>() {
        Some(SolverError::LimitExceeded { .. }) => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_wang(path: &Path) -> Result<WangTileSet> {
    Ok(WangTileSet::from_file(&read_json::<WangSetFile>(path)?)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(writeln!(out, "{text}")?),
    }
}

pub fn run(cmd: &CommandRequest, out: &mut dyn Write) -> Result<u8> {
    match cmd {
        CommandRequest::Compile { wang, output } => {
            let set = compile(&read_wang(wang)?)?;
            emit(out, output.as_deref(), &to_json(&PieceSetFile::from(&set)))?;
            if output.is_some() {
                let areas: Vec<String> = set.areas().iter().map(usize::to_string).collect();
                writeln!(out, "compiled 7 pieces: {}", areas.join(" "))?;
            }
            Ok(EXIT_OK)
        }
        CommandRequest::SolveWang {
            wang,
            torus,
            periodic,
            count,
            output,
        } => {
            let set = read_wang(wang)?;
            let found = match (torus, periodic) {
                (Some(pq), _) => {
                    let (p, q) = (pq[0], pq[1]);
                    if p == 0 || q == 0 {
                        bail!("torus dimensions must be positive");
                    }
                    if *count {
                        let n = solve_torus(&set, p, q, SearchMode::Count).count;
                        writeln!(out, "{n}")?;
                        return Ok(if n > 0 { EXIT_OK } else { EXIT_FAIL });
                    }
                    solve_torus(&set, p, q, SearchMode::First)
                        .tilings
                        .into_iter()
                        .next()
                }
                (None, Some(max)) => find_periodic(&set, *max).map(|(_, _, t)| t),
                (None, None) => bail!("give --torus P Q or --periodic MAX_CELLS"),
            };
            match found {
                Some(t) => {
                    emit(out, output.as_deref(), &to_json(&t))?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(out, "UNSAT")?;
                    Ok(EXIT_FAIL)
                }
            }
        }
        CommandRequest::SolvePoly {
            pieces,
            region,
            count,
            limit,
            output,
        } => {
            let file: PieceSetFile = read_json(pieces)?;
            let region = region.region()?;
            let universe = PlacementUniverse::new(region, file.polyominoes()?);
            let mode = if *count {
                SolveMode::Count
            } else {
                SolveMode::First
            };
            let sols = solve(&universe, mode, *limit)?;
            if *count {
                writeln!(out, "{}", sols.count)?;
            } else if let Some(t) = sols.tilings.into_iter().next() {
                emit(
                    out,
                    output.as_deref(),
                    &to_json(&PolyTilingFile::with_region(region, t)),
                )?;
            } else {
                writeln!(out, "UNSAT")?;
            }
            Ok(if sols.count > 0 { EXIT_OK } else { EXIT_FAIL })
        }
        CommandRequest::Simulate {
            wang,
            tiling,
            output,
        } => {
            let set = read_wang(wang)?;
            let tiling: WangTiling = read_json(tiling)?;
            let sim = emit_placements(&set, &tiling)?;
            let mismatches = linker_alignment_check(&set, &tiling)?;
            if !mismatches.is_empty() {
                bail!("{} linker tabs miss their slots", mismatches.len());
            }
            let n = sim.placements.len();
            emit(out, output.as_deref(), &to_json(&PolyTilingFile::from(sim)))?;
            if output.is_some() {
                writeln!(out, "{n} placements")?;
            }
            Ok(EXIT_OK)
        }
        CommandRequest::Verify {
            pieces,
            tiling,
            output,
        } => {
            let file: PieceSetFile = read_json(pieces)?;
            let tiling: PolyTilingFile = read_json(tiling)?;
            let region = tiling.region()?;
            let report = check_tiling(&region, &file.polyominoes()?, &tiling.placements)?;
            emit(out, output.as_deref(), &to_json(&report))?;
            if report.is_exact() {
                eprintln!("exact: {} cells covered once", region.cell_count());
                Ok(EXIT_OK)
            } else {
                eprintln!(
                    "not exact: {} uncovered, {} overlaps, {} outside",
                    report.uncovered.len(),
                    report.overlaps.len(),
                    report.outside.len()
                );
                Ok(EXIT_FAIL)
            }
        }
        CommandRequest::Render {
            input,
            pieces,
            cell_size,
            grid,
            ascii,
            output,
        } => {
            let text = read(input)?;
            let spec = RenderSpec {
                cell_size: *cell_size,
                grid: *grid,
            };
            let drawing = if let Ok(file) = from_json::<PieceSetFile>(&text) {
                let polys = file.polyominoes()?;
                if *ascii {
                    polys
                        .iter()
                        .map(|p| format!("{}\n{}", p.name(), ascii_cells(p.cells())))
                        .collect::<Vec<_>>()
                        .join("\n")
                } else {
                    render_pieces(&polys, &spec)?
                }
            } else {
                let tiling: PolyTilingFile = from_json(&text).with_context(|| {
                    format!(
                        "{} is neither a piece file nor a tiling file",
                        input.display()
                    )
                })?;
                let Some(pieces) = pieces else {
                    bail!("rendering a tiling needs --pieces");
                };
                let polys = read_json::<PieceSetFile>(pieces)?.polyominoes()?;
                if *ascii {
                    ascii_tiling(&tiling.region()?, &polys, &tiling.placements)?
                } else {
                    render_tiling(&polys, &tiling.placements, &spec)?
                }
            };
            emit(out, output.as_deref(), drawing.trim_end())?;
            Ok(EXIT_OK)
        }
        CommandRequest::Info { pieces } => {
            let file: PieceSetFile = read_json(pieces)?;
            writeln!(
                out,
                "{:<12} {:>7} {:>9} {:>9}",
                "piece", "cells", "bbox", "connected"
            )?;
            for e in &file.pieces {
                let bbox = e
                    .cells
                    .bounding_box()
                    .map(|b| format!("{}x{}", b.width(), b.height()))
                    .unwrap_or_else(|| "-".into());
                let conn = if is_connected(&e.cells) { "yes" } else { "no" };
                writeln!(
                    out,
                    "{:<12} {:>7} {:>9} {:>9}",
                    e.name,
                    e.cells.len(),
                    bbox,
                    conn
                )?;
            }
            Ok(EXIT_OK)
        }
    }
}

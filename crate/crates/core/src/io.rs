//! JSON file formats. Output is compact and canonical: cells are always
//! written in `(y, x)` order, so parsing and re-serializing a file
//! reproduces it byte for byte.

use serde::{de::DeserializeOwned, Deserialize, Serialize};
use thiserror::Error;

use crate::compiler::SevenPieceSet;
use crate::geometry::{CellSet, GeometryError, Polyomino, TorusLattice};
use crate::simulate::SimulatedTiling;
use crate::solver::{Placement, Region, SolverError};
use crate::wang::{WangError, WangSetFile, WangTileSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Wang(#[from] WangError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("piece file has no source tile set")]
    NoSource,
    #[error("piece file does not hold the seven compiled pieces in order")]
    NotSevenPieces,
    #[error("tiling file must give exactly one of `lattice` and `rectangle`")]
    AmbiguousRegion,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("in-memory values always serialize")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceEntry {
    pub name: String,
    pub cells: CellSet,
}

/// A list of named polyominoes, optionally with the tile set they were
/// compiled from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSetFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<WangSetFile>,
    pub pieces: Vec<PieceEntry>,
}

impl PieceSetFile {
    pub fn from_polyominoes(pieces: &[Polyomino]) -> Self {
        PieceSetFile {
            source: None,
            pieces: pieces
                .iter()
                .map(|p| PieceEntry {
                    name: p.name().to_string(),
                    cells: p.cells().clone(),
                })
                .collect(),
        }
    }

    pub fn polyominoes(&self) -> Result<Vec<Polyomino>, IoError> {
        self.pieces
            .iter()
            .map(|e| Ok(Polyomino::new(e.name.clone(), e.cells.clone())?))
            .collect()
    }

    pub fn seven(&self) -> Result<SevenPieceSet, IoError> {
        let source = WangTileSet::from_file(self.source.as_ref().ok_or(IoError::NoSource)?)?;
        SevenPieceSet::from_parts(source, self.polyominoes()?).ok_or(IoError::NotSevenPieces)
    }
}

impl From<&SevenPieceSet> for PieceSetFile {
    fn from(set: &SevenPieceSet) -> Self {
        PieceSetFile {
            source: Some(set.source.to_file()),
            ..PieceSetFile::from_polyominoes(set.pieces())
        }
    }
}

/// Placements on a torus quotient or inside a rectangle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTilingFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<TorusLattice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rectangle: Option<[i64; 2]>,
    pub placements: Vec<Placement>,
}

impl PolyTilingFile {
    pub fn region(&self) -> Result<Region, IoError> {
        match (self.lattice, self.rectangle) {
            (Some(l), None) => Ok(Region::Torus(l)),
            (None, Some([w, h])) => Ok(Region::rectangle(w, h)?),
            _ => Err(IoError::AmbiguousRegion),
        }
    }

    pub fn with_region(region: Region, placements: Vec<Placement>) -> Self {
        let (lattice, rectangle) = match region {
            Region::Torus(l) => (Some(l), None),
            Region::Rectangle { width, height } => (None, Some([width, height])),
        };
        PolyTilingFile {
            lattice,
            rectangle,
            placements,
        }
    }
}

impl From<SimulatedTiling> for PolyTilingFile {
    fn from(s: SimulatedTiling) -> Self {
        PolyTilingFile::with_region(Region::Torus(s.lattice), s.placements)
    }
}

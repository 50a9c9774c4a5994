//! Compile Wang tile sets into seven polyominoes that tile the plane by
//! translation exactly when the tile set tiles the plane, and verify the
//! resulting tilings on finite rectangles and tori.

pub mod blocks;
pub mod compiler;
pub mod geometry;
pub mod io;
pub mod render;
pub mod simulate;
pub mod solver;
pub mod wang;

//! Tilting theory for gentle algebras, computed two ways: algebraically through
//! exact projective resolutions, and geometrically through arcs on a dissected
//! marked surface.

pub mod linalg;
pub mod modules;
pub mod quiver;
pub mod surface;
pub mod tilting;
pub mod io;
pub mod corpus;
pub mod cutting;
pub mod random;
pub mod emit;
pub mod verify;

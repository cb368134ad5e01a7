pub mod hermitian;
pub mod order_core;
pub mod qubit_geometry;
pub mod isocone_fd;
pub mod lorentz;
pub mod multicomponent;
pub mod carrier;
pub mod cli;

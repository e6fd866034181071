pub mod scalar;
pub mod forest;
pub mod isometry;
pub mod rips;
pub mod lamination;
pub mod whitehead;
pub mod traintrack;
pub mod io;
pub mod cli;

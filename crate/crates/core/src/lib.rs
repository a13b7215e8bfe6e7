pub mod bogoliubov;
pub mod cli;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod linalg;
pub mod matio;
pub mod ode;
pub mod squeezed;
pub mod weber;

pub use error::{Error, Result};

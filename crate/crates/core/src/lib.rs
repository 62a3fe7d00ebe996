//! Exact verification of Cappell–Shaneson matrices and their
//! classification up to *-equivalence through ideal classes of `Z[θ]`.

pub mod cli;
pub mod correspondence;
pub mod cs;
pub mod linalg;
pub mod poly;
pub mod ring;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Cs(#[from] cs::CsError),
    #[error(transparent)]
    Ring(#[from] ring::RingError),
    #[error(transparent)]
    Correspondence(#[from] correspondence::CorrespondenceError),
}

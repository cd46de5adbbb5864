//! hsl: Hausdorff operators on power-weighted Lebesgue, Hardy and Bergman
//! spaces of the upper half-plane.
//!
//! The toolkit realizes the averaging operator f(x) -> int f(x/t) phi(t)/t dt
//! numerically and verifies, at desk scale, that its spectrum is the closure
//! of the range of the associated Fourier symbol: it computes kernel
//! moments, log-line kernels, symbol curves, circulant spectra, Wiener
//! resolvents, approximate eigenfunctions and the Cesaro circle, with norm
//! bounds on every side.
//!
//! Entry points:
//! - [`kernel::Kernel`]: kernel families (Cesaro, power cuts, sampled
//!   tables, atomic measures, truncations) with weighted moments.
//! - [`transform`]: the unitary log-line change of variables.
//! - [`symbol`]: the spectral symbol curve and distances to it.
//! - [`operator`]: applying the operator and weighted norms in all three
//!   space kinds.
//! - [`spectra`]: circulant eigenvalues, Wiener resolvents, spectral
//!   verification reports.
//! - [`approx_eigen`]: approximate eigenfunctions and norm asymptotics.
//! - [`cesaro`]: the closed-form Cesaro spectral circle.
//! - [`cli`]: the command-line surface used by the `hsl` binary.
//!
//! Run `cargo run --example spectrum_portrait` (or any other example) for a
//! guided tour.

pub mod approx_eigen;
pub mod cesaro;
pub mod cli;
pub mod error;
pub mod fft;
pub mod kernel;
pub mod operator;
pub mod quad;
pub mod report;
pub mod space;
pub mod spectra;
pub mod symbol;
pub mod transform;

pub use error::{Error, Result};
pub use kernel::{Atom, Kernel, MomentMode};
pub use space::{SpaceKind, SpaceParams};
pub use transform::{LogGrid, LogKernel};

//! The log-variable change s = ln t: uniform grids on the log line, the
//! unitary map between weighted half-line samples and unweighted line
//! samples, and kernel samples in the log variable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Kernel, Window};
use crate::space::SpaceParams;

/// Uniform symmetric grid s_j = -S + j h, j = 0..N-1, h = 2S/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    #[serde(rename = "S")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub len: usize,
}

impl LogGrid {
    pub fn new(half_width: f64, len: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "half-width must be positive, got {half_width}"
            )));
        }
        if len < 8 || !len.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "sample count must be a power of two >= 8, got {len}"
            )));
        }
        Ok(LogGrid { half_width, len })
    }

    /// Default grid: S = 20, N = 2^14.
    pub fn standard() -> Self {
        LogGrid {
            half_width: 20.0,
            len: 1 << 14,
        }
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.len as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.node(j)).collect()
    }

    /// The induced geometric grid t_j = e^{s_j}.
    pub fn geometric_nodes(&self) -> Vec<f64> {
        (0..self.len).map(|j| self.node(j).exp()).collect()
    }

    /// DFT frequencies xi_m = pi m / S for m = -N/2 .. N/2-1, ascending.
    pub fn dft_frequencies(&self) -> Vec<f64> {
        let step = std::f64::consts::PI / self.half_width;
        (0..self.len)
            .map(|i| (i as f64 - (self.len / 2) as f64) * step)
            .collect()
    }
}

/// Samples of the log-line kernel e^(beta s) phi(e^s) on a [`LogGrid`].
#[derive(Debug, Clone)]
pub struct LogKernel {
    pub grid: LogGrid,
    pub values: Vec<Complex64>,
    /// h * sum |values|: the on-grid L1 mass.
    pub l1_estimate: f64,
    /// Estimated kernel mass outside the grid window.
    pub tail_bound: f64,
}

/// Samples the kernel in the log variable.  Jump points that land on grid
/// nodes are sampled at the midpoint of the one-sided limits.
pub fn log_kernel(kernel: &Kernel, sp: &SpaceParams, grid: &LogGrid) -> Result<LogKernel> {
    if kernel.is_atomic() {
        return Err(Error::AtomicKernelUnsupported);
    }
    let total = kernel.moment_absolute(sp)?;
    let dexp = sp.dilation_exponent();
    let values: Vec<Complex64> = (0..grid.len)
        .map(|j| {
            let s = grid.node(j);
            kernel.grid_sample(s.exp()) * (dexp * s).exp()
        })
        .collect();
    let h = grid.spacing();
    let l1_estimate = h * values.iter().map(|v| v.norm()).sum::<f64>();
    let window = Window::new((-grid.half_width).exp(), grid.half_width.exp());
    let on_grid = kernel.moment_windowed(sp, crate::kernel::MomentMode::Absolute, &window)?;
    let tail_bound = (total.value.re - on_grid.value.re).max(0.0) + total.abs_err + on_grid.abs_err;
    Ok(LogKernel {
        grid: *grid,
        values,
        l1_estimate,
        tail_bound,
    })
}

/// Samples the 2S-periodization of the log-line kernel: the circulant
/// column value sum_n k(s_j + 2S n).  Mass outside the window is wrapped
/// instead of dropped, which is the discretization whose eigenvalues are
/// pure Poisson samples of the symbol.
pub fn log_kernel_periodized(kernel: &Kernel, sp: &SpaceParams, grid: &LogGrid) -> Result<LogKernel> {
    if kernel.is_atomic() {
        return Err(Error::AtomicKernelUnsupported);
    }
    kernel.moment_absolute(sp)?;
    let dexp = sp.dilation_exponent();
    let period = 2.0 * grid.half_width;
    let (t_lo, t_hi) = kernel.support();
    let s_lo = t_lo.ln();
    let s_hi = if t_hi.is_finite() {
        t_hi.ln()
    } else {
        // weighted decay rate of e^(dexp s) phi(e^s) on the infinite piece
        let rate = kernel
            .log_pieces()?
            .iter()
            .filter(|p| p.s_hi.is_infinite())
            .map(|p| p.decay_rate - dexp)
            .fold(f64::INFINITY, f64::min);
        debug_assert!(rate > 0.0);
        let scale = 1.0
            + kernel.grid_sample(t_lo).norm() * (dexp * s_lo).exp()
            + kernel.grid_sample((s_lo + 1.0).exp()).norm() * (dexp * (s_lo + 1.0)).exp();
        s_lo + (scale.ln() + 46.0) / rate
    }
    .min(690.0); // keep e^s finite
    let wrapped_sample = |s: f64| -> Complex64 {
        let mut acc = kernel.grid_sample(s.exp()) * (dexp * s).exp();
        let n_min = ((s_lo - s) / period).floor() as i64;
        let n_max = ((s_hi - s) / period).ceil() as i64;
        for n in n_min..=n_max {
            if n == 0 {
                continue;
            }
            let sn = s + n as f64 * period;
            acc += kernel.grid_sample(sn.exp()) * (dexp * sn).exp();
        }
        acc
    };
    let values: Vec<Complex64> = (0..grid.len)
        .map(|j| wrapped_sample(grid.node(j)))
        .collect();
    let h = grid.spacing();
    let l1_estimate = h * values.iter().map(|v| v.norm()).sum::<f64>();
    Ok(LogKernel {
        grid: *grid,
        values,
        l1_estimate,
        tail_bound: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Weighted half-line samples on t_j = e^{s_j} to line samples.
    Forward,
    /// Line samples back to weighted half-line samples.
    Inverse,
}

/// The pointwise unitary change of variables between the weighted
/// half-line and the unweighted line.  Forward: g_j = e^{beta s_j} f(t_j);
/// Inverse: f_j = t_j^{-beta} g(s_j).  The two directions are exact
/// algebraic inverses of each other.
pub fn unitary(
    direction: Direction,
    samples: &[Complex64],
    sp: &SpaceParams,
    grid: &LogGrid,
) -> Result<Vec<Complex64>> {
    if samples.len() != grid.len {
        return Err(Error::GridMismatch(format!(
            "expected {} samples, got {}",
            grid.len,
            samples.len()
        )));
    }
    let dexp = sp.dilation_exponent();
    Ok((0..grid.len)
        .map(|j| {
            let w = (dexp * grid.node(j)).exp();
            match direction {
                Direction::Forward => samples[j] * w,
                Direction::Inverse => samples[j] / w,
            }
        })
        .collect())
}

/// Discrete p-norm on the log grid: (h sum |g_j|^p)^(1/p).
pub fn log_norm(samples: &[Complex64], exponent: f64, grid: &LogGrid) -> f64 {
    let h = grid.spacing();
    let sum: f64 = samples.iter().map(|g| g.norm().powf(exponent)).sum();
    (h * sum).powf(1.0 / exponent)
}

/// Discrete weighted p-norm on the induced geometric grid with the
/// change-of-variables quadrature weights w_j = t_j h:
/// (sum |f_j|^p t_j^a t_j h)^(1/p).
pub fn geometric_weighted_norm(samples: &[Complex64], sp: &SpaceParams, grid: &LogGrid) -> f64 {
    let h = grid.spacing();
    let sum: f64 = (0..grid.len)
        .map(|j| {
            let t = grid.node(j).exp();
            samples[j].norm().powf(sp.exponent) * t.powf(sp.weight_power) * t * h
        })
        .sum();
    sum.powf(1.0 / sp.exponent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn grid_nodes_symmetric() {
        let g = LogGrid::new(20.0, 16).unwrap();
        assert_eq!(g.node(0), -20.0);
        assert_eq!(g.node(8), 0.0);
        assert!((g.node(15) - (20.0 - g.spacing())).abs() < 1e-12);
        assert!(LogGrid::new(20.0, 12).is_err());
        assert!(LogGrid::new(0.0, 16).is_err());
    }

    #[test]
    fn cesaro_log_samples() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let g = LogGrid::new(20.0, 1 << 10).unwrap();
        let lk = log_kernel(&k, &sp, &g).unwrap();
        // k(s) = e^{-s/2} chi_{s>=0}; at the jump node s=0 the sample is
        // the midpoint 1/2
        let j0 = g.len / 2;
        assert_eq!(g.node(j0), 0.0);
        assert!((lk.values[j0] - c(0.5, 0.0)).norm() < 1e-15);
        // nodes strictly left of s=0 are off-support
        let jm = ((-1.0 + g.half_width) / g.spacing()).floor() as usize;
        assert!(g.node(jm) < 0.0);
        assert_eq!(lk.values[jm], c(0.0, 0.0));
        // interior value
        let j1 = j0 + 256;
        let s = g.node(j1);
        assert!((lk.values[j1] - c((-0.5 * s).exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn powercut_l1_estimate_converges() {
        // phi = chi_{[1,e)}, p=1, a=0: k(s) = e^s chi_{[0,1)}, L1 = e - 1
        let k = Kernel::power_cut(c(0.0, 0.0), 1.0, std::f64::consts::E).unwrap();
        let sp = SpaceParams::lebesgue(1.0, 0.0).unwrap();
        let target = std::f64::consts::E - 1.0;
        let coarse = log_kernel(&k, &sp, &LogGrid::new(20.0, 1 << 10).unwrap()).unwrap();
        let fine = log_kernel(&k, &sp, &LogGrid::new(20.0, 1 << 16).unwrap()).unwrap();
        assert!((fine.l1_estimate - target).abs() < (coarse.l1_estimate - target).abs());
        assert!((fine.l1_estimate - target).abs() < 1e-3);
        // l1 + tail covers the true moment
        let m = k.moment_absolute(&sp).unwrap().value.re;
        assert!(fine.l1_estimate + fine.tail_bound >= m - 1e-3);
    }

    #[test]
    fn unitary_indicator_example() {
        // f = chi_{[1,e]} on the half-line, p=2, a=0: Uf(s) = e^{s/2} chi_{[0,1]}
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let g = LogGrid::new(10.0, 1 << 12).unwrap();
        let f: Vec<Complex64> = g
            .geometric_nodes()
            .iter()
            .map(|&t| {
                if (1.0..=std::f64::consts::E).contains(&t) {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        let uf = unitary(Direction::Forward, &f, &sp, &g).unwrap();
        for j in 0..g.len {
            let s = g.node(j);
            let expected = if (0.0..=1.0).contains(&s) {
                (0.5 * s).exp()
            } else {
                0.0
            };
            assert!((uf[j] - c(expected, 0.0)).norm() < 1e-12);
        }
        // both squared norms approximate e - 1 and agree exactly
        let n_log = log_norm(&uf, 2.0, &g);
        let n_geo = geometric_weighted_norm(&f, &sp, &g);
        assert!((n_log.powi(2) - (std::f64::consts::E - 1.0)).abs() < 2e-3);
        assert!((n_log - n_geo).abs() <= 1e-14 * n_geo);
    }

    #[test]
    fn unitary_weighted_example() {
        // f(x) = 1/x on [1, e], p=2, a=1 (beta = 1): Uf = chi_{[0,1]},
        // both squared norms equal 1
        let sp = SpaceParams::lebesgue(2.0, 1.0).unwrap();
        let g = LogGrid::new(10.0, 1 << 14).unwrap();
        let f: Vec<Complex64> = g
            .geometric_nodes()
            .iter()
            .map(|&t| {
                if (1.0..=std::f64::consts::E).contains(&t) {
                    c(1.0 / t, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            })
            .collect();
        let uf = unitary(Direction::Forward, &f, &sp, &g).unwrap();
        let n_log = log_norm(&uf, 2.0, &g);
        let n_geo = geometric_weighted_norm(&f, &sp, &g);
        assert!((n_log.powi(2) - 1.0).abs() < 2e-3, "{}", n_log.powi(2));
        assert!((n_log - n_geo).abs() <= 1e-14 * n_geo);
    }

    #[test]
    fn unitary_round_trip_identity() {
        let sp = SpaceParams::lebesgue(3.0, 0.5).unwrap();
        let g = LogGrid::new(15.0, 64).unwrap();
        let f: Vec<Complex64> = (0..64)
            .map(|j| c((j as f64 * 0.37).sin(), (j as f64 * 0.11).cos()))
            .collect();
        let there = unitary(Direction::Forward, &f, &sp, &g).unwrap();
        let back = unitary(Direction::Inverse, &there, &sp, &g).unwrap();
        for (a, b) in f.iter().zip(back.iter()) {
            assert!((a - b).norm() <= 1e-15 * a.norm().max(1.0));
        }
        assert!(matches!(
            unitary(Direction::Forward, &f[..10], &sp, &g),
            Err(Error::GridMismatch(_))
        ));
    }
}

//! FFT-backed discrete Fourier machinery on [`LogGrid`]s.
//!
//! Conventions: with s_j = -S + j h and xi_m = pi m / S, the forward map
//! approximates the continuous transform int k(s) e^{-i xi s} ds by
//! h sum_j k(s_j) e^{-i xi_m s_j}, which reduces to a sign-twisted FFT.
//! Frequencies are returned ascending, m = -N/2 .. N/2-1.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::transform::LogGrid;

fn run_fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    fft.process(values);
}

/// h sum_j v_j e^{-i xi_m s_j} at every DFT frequency, ascending in m.
pub fn grid_to_frequency(grid: &LogGrid, values: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(values.len(), grid.len);
    let n = grid.len;
    let h = grid.spacing();
    let mut buf = values.to_vec();
    run_fft(&mut buf, false);
    // out[i] corresponds to m = i - N/2; FFT bin is m mod N and the node
    // offset -S contributes the (-1)^m twist (N/2 is even for N >= 8).
    (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            buf[(i + n / 2) % n] * (h * sign)
        })
        .collect()
}

/// Inverse of [`grid_to_frequency`]: (1/2S) sum_m w_m e^{+i xi_m s_j}.
/// The two maps compose to the identity exactly (up to rounding).
pub fn frequency_to_grid(grid: &LogGrid, freq_values: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(freq_values.len(), grid.len);
    let n = grid.len;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, v) in freq_values.iter().enumerate() {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        buf[(i + n / 2) % n] = v * sign;
    }
    run_fft(&mut buf, true);
    let scale = 1.0 / (2.0 * grid.half_width);
    buf.iter().map(|v| v * scale).collect()
}

/// Linear (not circular) discrete convolution h * (k conv g) sampled back
/// on the same grid, via zero-padding to 2N.
pub fn linear_convolution(grid: &LogGrid, kernel: &[Complex64], signal: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(kernel.len(), grid.len);
    assert_eq!(signal.len(), grid.len);
    let n = grid.len;
    let m = 2 * n;
    let mut ka = vec![Complex64::new(0.0, 0.0); m];
    let mut ga = vec![Complex64::new(0.0, 0.0); m];
    ka[..n].copy_from_slice(kernel);
    ga[..n].copy_from_slice(signal);
    run_fft(&mut ka, false);
    run_fft(&mut ga, false);
    for (a, b) in ka.iter_mut().zip(ga.iter()) {
        *a *= b;
    }
    run_fft(&mut ka, true);
    let scale = grid.spacing() / m as f64;
    // full convolution index i + j lives at s = -2S + l h; our node s_i
    // corresponds to l = i + N/2
    (0..n).map(|i| ka[i + n / 2] * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_grid_to_frequency(grid: &LogGrid, values: &[Complex64]) -> Vec<Complex64> {
        let h = grid.spacing();
        grid.dft_frequencies()
            .iter()
            .map(|&xi| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    acc += v * Complex64::new(0.0, -xi * grid.node(j)).exp();
                }
                acc * h
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let grid = LogGrid::new(3.0, 16).unwrap();
        let values: Vec<Complex64> = (0..16)
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 0.3).cos()))
            .collect();
        let fast = grid_to_frequency(&grid, &values);
        let slow = naive_grid_to_frequency(&grid, &values);
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        let grid = LogGrid::new(5.0, 64).unwrap();
        let values: Vec<Complex64> = (0..64)
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64).sqrt()))
            .collect();
        let back = frequency_to_grid(&grid, &grid_to_frequency(&grid, &values));
        for (a, b) in values.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_convolution_matches_direct_sum() {
        let grid = LogGrid::new(4.0, 32).unwrap();
        let h = grid.spacing();
        let k: Vec<Complex64> = (0..32)
            .map(|j| Complex64::new((-(grid.node(j)).powi(2)).exp(), 0.1))
            .collect();
        let g: Vec<Complex64> = (0..32)
            .map(|j| Complex64::new((j as f64 * 0.2).cos(), 0.0))
            .collect();
        let fast = linear_convolution(&grid, &k, &g);
        for i in 0..32usize {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..32usize {
                // g index for s_i - s_j is i - j + N/2
                let l = i as isize - j as isize + 16;
                if (0..32).contains(&l) {
                    acc += k[j] * g[l as usize];
                }
            }
            acc *= h;
            assert!((fast[i] - acc).norm() < 1e-12);
        }
    }
}

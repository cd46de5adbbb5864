//! The spectral symbol: the Fourier transform of the log-line kernel,
//! evaluated by exact antiderivatives, adaptive/Filon quadrature or the
//! FFT, plus geometric queries on the sampled curve.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft;
use crate::kernel::Kernel;
use crate::space::SpaceParams;
use crate::transform::LogGrid;
use crate::{quad, transform};

/// How a [`SymbolCurve`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolMethod {
    ClosedForm,
    Quadrature,
    Fft,
}

/// Method request for [`symbol_curve`].
#[derive(Debug, Clone, Copy)]
pub enum MethodHint {
    /// Exact antiderivatives (available for every kernel variant).
    Auto,
    ClosedForm,
    Quadrature,
    /// DFT of the sampled log-line kernel; the nodes must be the grid's
    /// DFT frequencies.
    Fft(LogGrid),
}

/// One symbol value with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct SymbolValue {
    pub value: Complex64,
    pub abs_err: f64,
}

/// Sampled spectral curve xi -> symbol(xi).
#[derive(Debug, Clone)]
pub struct SymbolCurve {
    pub xi: Vec<f64>,
    pub values: Vec<Complex64>,
    pub err: Vec<f64>,
    pub method: SymbolMethod,
    pub sup_modulus: f64,
    /// Set when the sampled moduli decay toward zero at the ends of the
    /// range, so 0 belongs to the closure of the curve (always the case
    /// for integrable kernels by Riemann-Lebesgue; never asserted for
    /// atomic kernels, whose symbols are almost periodic).
    pub closure_includes_zero: bool,
}

/// Fraction of the sup modulus under which the tail of the sampled curve
/// is considered to have decayed to zero.
const CLOSURE_ZERO_FRACTION: f64 = 0.02;

/// Default report range: [-200, 200] with 4096 nodes.
pub fn default_xi_nodes() -> Vec<f64> {
    xi_nodes(200.0, 4096)
}

/// `count` equispaced nodes on [-max, max] (inclusive endpoints).
pub fn xi_nodes(max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let step = 2.0 * max / (count - 1) as f64;
    (0..count).map(|i| -max + i as f64 * step).collect()
}

/// Exact symbol value: the weighted transform of the kernel at the complex
/// exponent beta - i xi, by antiderivative (closed-form families, sampled
/// tables segment by segment) or by the finite atomic sum.
pub fn symbol_at(kernel: &Kernel, sp: &SpaceParams, xi: f64) -> Result<SymbolValue> {
    let c = Complex64::new(sp.dilation_exponent(), -xi);
    let (value, abs_err) =
        kernel.weighted_transform_windowed(c, &crate::kernel::Window::full())?;
    Ok(SymbolValue { value, abs_err })
}

/// Symbol value by generic quadrature in the log variable, independent of
/// the antiderivative route: adaptive Gauss-Kronrod for moderate
/// oscillation, Filon beyond it.
pub fn symbol_at_quadrature(kernel: &Kernel, sp: &SpaceParams, xi: f64) -> Result<SymbolValue> {
    if kernel.is_atomic() {
        // no density to integrate; the atomic sum is already exact
        return symbol_at(kernel, sp, xi);
    }
    let dexp = sp.dilation_exponent();
    // confirms convergence before integrating
    kernel.moment_absolute(sp)?;
    let mut total = quad::QuadResult::zero();
    for piece in kernel.log_pieces()? {
        let f = |s: f64| kernel.eval(s.exp()) * (dexp * s).exp();
        let (s_hi, tail_err) = if piece.s_hi.is_finite() {
            (piece.s_hi, 0.0)
        } else {
            // truncate the exponential tail of e^{beta s} phi(e^s)
            let rate = piece.decay_rate - dexp;
            debug_assert!(rate > 0.0, "divergence should have been caught by the moment");
            let mag = f(piece.s_lo).norm().max(f(piece.s_lo + 1.0).norm()).max(1e-300);
            let len = ((mag / (quad::DEFAULT_ABS_TOL * rate)).ln().max(1.0) + 5.0) / rate;
            (piece.s_lo + len, mag * (-rate * len).exp() / rate)
        };
        let mut r = quad::integrate_oscillatory(
            f,
            piece.s_lo,
            s_hi,
            xi,
            quad::DEFAULT_REL_TOL,
            quad::DEFAULT_ABS_TOL,
        );
        r.abs_err += tail_err;
        total.accumulate(&r);
    }
    Ok(SymbolValue {
        value: total.value,
        abs_err: total.abs_err,
    })
}

fn closure_flag(kernel: &Kernel, xi: &[f64], moduli: &[f64], sup: f64) -> bool {
    if kernel.is_atomic() || moduli.is_empty() {
        return false;
    }
    // examine the outer deciles of the sampled range
    let n = moduli.len();
    let tail = (n / 10).max(1);
    let left_min = moduli[..tail].iter().cloned().fold(f64::INFINITY, f64::min);
    let right_min = moduli[n - tail..]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let _ = xi;
    left_min.max(right_min) <= CLOSURE_ZERO_FRACTION * sup.max(f64::MIN_POSITIVE)
}

fn build_curve(
    kernel: &Kernel,
    xi: Vec<f64>,
    values: Vec<Complex64>,
    err: Vec<f64>,
    method: SymbolMethod,
) -> SymbolCurve {
    let moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let sup_modulus = moduli.iter().cloned().fold(0.0, f64::max);
    let closure_includes_zero = closure_flag(kernel, &xi, &moduli, sup_modulus);
    SymbolCurve {
        xi,
        values,
        err,
        method,
        sup_modulus,
        closure_includes_zero,
    }
}

/// Samples the symbol over the requested nodes.
pub fn symbol_curve(
    kernel: &Kernel,
    sp: &SpaceParams,
    xi_nodes: &[f64],
    hint: MethodHint,
) -> Result<SymbolCurve> {
    match hint {
        MethodHint::Auto | MethodHint::ClosedForm => {
            let vals: Result<Vec<SymbolValue>> = xi_nodes
                .par_iter()
                .map(|&xi| symbol_at(kernel, sp, xi))
                .collect();
            let vals = vals?;
            Ok(build_curve(
                kernel,
                xi_nodes.to_vec(),
                vals.iter().map(|v| v.value).collect(),
                vals.iter().map(|v| v.abs_err).collect(),
                SymbolMethod::ClosedForm,
            ))
        }
        MethodHint::Quadrature => {
            let vals: Result<Vec<SymbolValue>> = xi_nodes
                .par_iter()
                .map(|&xi| symbol_at_quadrature(kernel, sp, xi))
                .collect();
            let vals = vals?;
            Ok(build_curve(
                kernel,
                xi_nodes.to_vec(),
                vals.iter().map(|v| v.value).collect(),
                vals.iter().map(|v| v.abs_err).collect(),
                SymbolMethod::Quadrature,
            ))
        }
        MethodHint::Fft(grid) => {
            let freqs = grid.dft_frequencies();
            if xi_nodes.len() != freqs.len()
                || xi_nodes
                    .iter()
                    .zip(freqs.iter())
                    .any(|(a, b)| (a - b).abs() > 1e-9 * b.abs().max(1.0))
            {
                return Err(Error::GridMismatch(
                    "FFT symbol nodes must be the grid's DFT frequencies".into(),
                ));
            }
            symbol_curve_fft(kernel, sp, &grid)
        }
    }
}

/// FFT-method curve at the DFT frequencies of `grid`.
pub fn symbol_curve_fft(kernel: &Kernel, sp: &SpaceParams, grid: &LogGrid) -> Result<SymbolCurve> {
    let lk = transform::log_kernel(kernel, sp, grid)?;
    let values = fft::grid_to_frequency(grid, &lk.values);
    let xi = grid.dft_frequencies();
    let err = fft_error_estimates(kernel, sp, grid, lk.tail_bound, &xi);
    Ok(build_curve(kernel, xi, values, err, SymbolMethod::Fft))
}

/// Per-frequency error estimate for the FFT symbol: grid tail plus the
/// Euler-Maclaurin boundary terms of the trapezoidal sum, whose leading
/// contributions come from kernel jumps.
fn fft_error_estimates(
    kernel: &Kernel,
    sp: &SpaceParams,
    grid: &LogGrid,
    tail_bound: f64,
    xi: &[f64],
) -> Vec<f64> {
    let dexp = sp.dilation_exponent();
    let h = grid.spacing();
    let mut jump_mass = 0.0;
    let mut slope_mass = 0.0;
    for t in kernel_jump_points(kernel) {
        let jump = (kernel.eval_side(t, crate::kernel::Side::Right)
            - kernel.eval_side(t, crate::kernel::Side::Left))
        .norm()
            * t.powf(dexp);
        jump_mass += jump;
        slope_mass += jump * (1.0 + dexp.abs());
    }
    // endpoint values of the sampled kernel
    let edge = kernel.grid_sample((-grid.half_width).exp()).norm()
        * (-dexp * grid.half_width).exp()
        + kernel.grid_sample(grid.half_width.exp()).norm() * (dexp * grid.half_width).exp();
    let base = h * h / 12.0;
    xi.iter()
        .map(|&x| {
            let safety = 3.0;
            tail_bound + safety * base * (slope_mass + edge + x.abs() * (jump_mass + edge))
        })
        .collect()
}

/// Positions in t where the kernel density jumps.
pub fn kernel_jump_points(kernel: &Kernel) -> Vec<f64> {
    use crate::kernel::Side;
    let mut candidates: Vec<f64> = Vec::new();
    collect_jump_candidates(kernel, &mut candidates);
    candidates.retain(|&t| {
        t > 0.0
            && (kernel.eval_side(t, Side::Right) - kernel.eval_side(t, Side::Left)).norm() > 0.0
    });
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    candidates
}

fn collect_jump_candidates(kernel: &Kernel, out: &mut Vec<f64>) {
    match kernel {
        Kernel::Cesaro { .. } => out.push(1.0),
        Kernel::PowerCut { lower, upper, .. } => {
            out.push(*lower);
            if upper.is_finite() {
                out.push(*upper);
            }
        }
        Kernel::Sampled { nodes, .. } => {
            out.push(nodes[0]);
            out.push(*nodes.last().unwrap());
        }
        Kernel::Atomic { .. } => {}
        Kernel::Truncated { inner, delta } => {
            collect_jump_candidates(inner, out);
            out.push(*delta);
            out.push(1.0 / delta);
        }
    }
}

/// Distance from lambda to the sampled curve with its refined location.
#[derive(Debug, Clone, Copy)]
pub struct CurveDistance {
    pub distance: f64,
    /// xi of the closest sample (infinite when the zero limit point of the
    /// closure is the closest).
    pub argmin_xi: f64,
}

/// Minimum distance from lambda to the curve samples, refined by local
/// quadratic interpolation of the squared distance in xi.  When the curve
/// closure contains zero, the distance to 0 competes as well.
pub fn curve_distance(curve: &SymbolCurve, lambda: Complex64) -> CurveDistance {
    assert!(!curve.values.is_empty(), "curve must be non-empty");
    let d2: Vec<f64> = curve.values.iter().map(|v| (lambda - v).norm_sqr()).collect();
    let mut best = 0;
    for i in 1..d2.len() {
        if d2[i] < d2[best] {
            best = i;
        }
    }
    let mut dist2 = d2[best];
    if best > 0 && best + 1 < d2.len() {
        // parabola through the three bracketing samples
        let (x0, x1, x2) = (curve.xi[best - 1], curve.xi[best], curve.xi[best + 1]);
        let (y0, y1, y2) = (d2[best - 1], d2[best], d2[best + 1]);
        let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
        if denom != 0.0 {
            let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
            let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
            if a > 0.0 {
                let vertex = -b / (2.0 * a);
                if vertex > x0 && vertex < x2 {
                    let cc = y1 - a * x1 * x1 - b * x1;
                    dist2 = dist2.min((a * vertex * vertex + b * vertex + cc).max(0.0));
                }
            }
        }
    }
    let mut out = CurveDistance {
        distance: dist2.sqrt(),
        argmin_xi: curve.xi[best],
    };
    if curve.closure_includes_zero && lambda.norm() < out.distance {
        out = CurveDistance {
            distance: lambda.norm(),
            argmin_xi: f64::INFINITY,
        };
    }
    out
}

/// Golden-section refinement of an extremum of xi -> objective(symbol(xi)).
fn golden_refine<F>(f: &F, mut lo: f64, mut hi: f64, maximize: bool) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..90 {
        let pick_left = if maximize { f1 > f2 } else { f1 < f2 };
        if pick_left {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        if (hi - lo).abs() < 1e-13 * (1.0 + lo.abs() + hi.abs()) {
            break;
        }
    }
    let xm = 0.5 * (lo + hi);
    Ok((xm, f(xm)?))
}

/// Supremum of |symbol| over the scanned range, refined by golden-section
/// search with fresh symbol evaluations.  Returns (sup, arg xi).
pub fn sup_modulus_refined(kernel: &Kernel, sp: &SpaceParams, scan: &[f64]) -> Result<(f64, f64)> {
    let moduli: Result<Vec<f64>> = scan
        .par_iter()
        .map(|&xi| Ok(symbol_at(kernel, sp, xi)?.value.norm()))
        .collect();
    let moduli = moduli?;
    let mut best = 0;
    for i in 1..moduli.len() {
        if moduli[i] > moduli[best] {
            best = i;
        }
    }
    let lo = scan[best.saturating_sub(1)];
    let hi = scan[(best + 1).min(scan.len() - 1)];
    if lo == hi {
        return Ok((moduli[best], scan[best]));
    }
    let f = |xi: f64| Ok(symbol_at(kernel, sp, xi)?.value.norm());
    let (xm, fm) = golden_refine(&f, lo, hi, true)?;
    if fm >= moduli[best] {
        Ok((fm, xm))
    } else {
        Ok((moduli[best], scan[best]))
    }
}

/// Minimum of |lambda - symbol(xi)| over the scanned range, refined by
/// golden-section search with fresh symbol evaluations.
pub fn min_symbol_distance_refined(
    kernel: &Kernel,
    sp: &SpaceParams,
    lambda: Complex64,
    scan: &[f64],
) -> Result<(f64, f64)> {
    let dist: Result<Vec<f64>> = scan
        .par_iter()
        .map(|&xi| Ok((lambda - symbol_at(kernel, sp, xi)?.value).norm()))
        .collect();
    let dist = dist?;
    let mut best = 0;
    for i in 1..dist.len() {
        if dist[i] < dist[best] {
            best = i;
        }
    }
    let lo = scan[best.saturating_sub(1)];
    let hi = scan[(best + 1).min(scan.len() - 1)];
    if lo == hi {
        return Ok((dist[best], scan[best]));
    }
    let f = |xi: f64| Ok((lambda - symbol_at(kernel, sp, xi)?.value).norm());
    let (xm, fm) = golden_refine(&f, lo, hi, false)?;
    if fm <= dist[best] {
        Ok((fm, xm))
    } else {
        Ok((dist[best], scan[best]))
    }
}

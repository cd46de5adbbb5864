//! Applying Hausdorff operators to functions (line samples, boundary
//! functions, holomorphic evaluations) and weighted norms in all three
//! space kinds.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::{Kernel, Window};
use crate::quad::{self, QuadResult};
use crate::space::{SpaceKind, SpaceParams};
use crate::transform::LogKernel;

type EvalFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A function the operator can be applied to: a deterministic evaluation
/// z -> C together with optional decay/support metadata used by the norm
/// quadratures for tail accounting.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: EvalFn,
    /// |f(z)| ~ C |z|^(-decay) as |z| -> inf, when known.
    decay: Option<f64>,
    /// Real-line support [lo, hi] for sampled/compact handles.
    support: Option<(f64, f64)>,
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("decay", &self.decay)
            .field("support", &self.support)
            .finish()
    }
}

impl FunctionHandle {
    pub fn from_fn<F>(eval: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        FunctionHandle {
            eval: Arc::new(eval),
            decay: None,
            support: None,
        }
    }

    /// Declares the modulus decay exponent: |f(z)| ~ C|z|^(-decay).
    pub fn with_decay(mut self, decay: f64) -> Self {
        self.decay = Some(decay);
        self
    }

    /// Piecewise-linear interpolant of samples on an ascending real grid,
    /// zero outside; evaluation uses the real part of the argument.
    pub fn from_real_samples(x: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if x.len() < 2 || x.len() != values.len() {
            return Err(Error::InvalidKernel(
                "sampled function needs matching x/value lists (>= 2 nodes)".into(),
            ));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidKernel(
                "sampled function nodes must be strictly ascending".into(),
            ));
        }
        let support = (x[0], *x.last().unwrap());
        let eval = move |z: Complex64| -> Complex64 {
            let t = z.re;
            if t < x[0] || t > *x.last().unwrap() {
                return Complex64::new(0.0, 0.0);
            }
            let i = match x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
                Ok(i) => return values[i],
                Err(i) => i - 1,
            };
            let w = (t - x[i]) / (x[i + 1] - x[i]);
            values[i] * (1.0 - w) + values[i + 1] * w
        };
        Ok(FunctionHandle {
            eval: Arc::new(eval),
            decay: None,
            support: Some(support),
        })
    }

    /// Indicator of the real interval (lo, hi).
    pub fn indicator(lo: f64, hi: f64) -> Self {
        FunctionHandle {
            eval: Arc::new(move |z: Complex64| {
                if z.re > lo && z.re < hi {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            decay: None,
            support: Some((lo, hi)),
        }
    }

    /// exp(-(x-center)^2/width^2) on the real line (by real part).
    pub fn gaussian(center: f64, width: f64) -> Self {
        FunctionHandle {
            eval: Arc::new(move |z: Complex64| {
                let u = (z.re - center) / width;
                Complex64::new((-u * u).exp(), 0.0)
            }),
            decay: None,
            support: Some((center - 40.0 * width, center + 40.0 * width)),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let inner = self.eval.clone();
        FunctionHandle {
            eval: Arc::new(move |z| inner(z) * factor),
            decay: self.decay,
            support: self.support,
        }
    }

    pub fn decay(&self) -> Option<f64> {
        self.decay
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let v = (self.eval)(z);
        if v.re.is_nan() || v.im.is_nan() {
            return Err(Error::EvaluationFailure(z));
        }
        Ok(v)
    }

    /// Unchecked evaluation for hot loops; NaNs surface in the results.
    #[inline]
    pub fn eval_raw(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }
}

/// Relative tolerance for per-point operator quadratures.
const APPLY_REL_TOL: f64 = 1e-9;
const APPLY_ABS_TOL: f64 = 1e-12;

/// int phi(t) g(t) dt/t for a non-atomic kernel, in the log variable.
fn kernel_average<G>(kernel: &Kernel, g: G) -> Result<QuadResult>
where
    G: Fn(f64) -> Complex64 + Copy,
{
    // dedicated segment path for sampled tables (their interpolant is the
    // model; a fixed two-point Gauss per segment is exact to higher order
    // than the interpolation itself)
    if let Kernel::Sampled { nodes, values } = kernel {
        return Ok(sampled_average(nodes, values, &Window::full(), g));
    }
    if let Kernel::Truncated { inner, delta } = kernel {
        if let Kernel::Sampled { nodes, values } = &**inner {
            let w = Window::new(*delta, 1.0 / delta);
            return Ok(sampled_average(nodes, values, &w, g));
        }
    }
    let mut total = QuadResult::zero();
    for piece in kernel.log_pieces()? {
        let integrand = |s: f64| kernel.eval(s.exp()) * g(s.exp());
        // infinite pieces are cut where the kernel decay makes the tail
        // negligible even against a bounded g
        let s_hi = if piece.s_hi.is_finite() {
            piece.s_hi
        } else {
            piece.s_lo + 50.0 / piece.decay_rate.max(1e-3) + 5.0
        };
        // fixed-length blocks keep localized features of g visible to the
        // adaptive rule
        let mut lo = piece.s_lo;
        while lo < s_hi {
            let hi = (lo + 8.0).min(s_hi);
            let r = quad::integrate(integrand, lo, hi, APPLY_REL_TOL, APPLY_ABS_TOL);
            total.accumulate(&r);
            lo = hi;
        }
    }
    Ok(total)
}

/// Segment-sum path: int lin(t) g(t) dt/t by two-point Gauss per segment.
fn sampled_average<G>(nodes: &[f64], values: &[Complex64], window: &Window, g: G) -> QuadResult
where
    G: Fn(f64) -> Complex64,
{
    let max_mag = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let cutoff = 1e-16 * max_mag;
    let half_width_node = 0.5 / 3.0_f64.sqrt();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut evals = 0usize;
    for i in 0..nodes.len() - 1 {
        if values[i].norm() <= cutoff && values[i + 1].norm() <= cutoff {
            continue;
        }
        let lo = window.lo.max(nodes[i]);
        let hi = window.hi.min(nodes[i + 1]);
        if !(lo < hi) {
            continue;
        }
        let slope = (values[i + 1] - values[i]) / (nodes[i + 1] - nodes[i]);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let t1 = mid - 2.0 * half * half_width_node;
        let t2 = mid + 2.0 * half * half_width_node;
        let f1 = (values[i] + slope * (t1 - nodes[i])) * g(t1) / t1;
        let f2 = (values[i] + slope * (t2 - nodes[i])) * g(t2) / t2;
        acc += (f1 + f2) * half;
        evals += 2;
    }
    QuadResult {
        value: acc,
        abs_err: 1e-13 * acc.norm() + 1e-15 * max_mag,
        evals,
    }
}

/// H f at real points: int f(x/t) phi(t) dt/t per point (exact atomic
/// sums, quadrature otherwise).
pub fn apply_real(
    kernel: &Kernel,
    f: &FunctionHandle,
    x_points: &[f64],
    sp: &SpaceParams,
) -> Result<Vec<Complex64>> {
    kernel.moment_absolute(sp)?;
    x_points
        .par_iter()
        .map(|&x| apply_real_at(kernel, f, x))
        .collect()
}

/// Single-point evaluation of H f; preconditions are the caller's.
pub fn apply_real_at(kernel: &Kernel, f: &FunctionHandle, x: f64) -> Result<Complex64> {
    let value = match kernel {
        Kernel::Atomic { atoms } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in atoms {
                acc += a.mass * f.eval(Complex64::new(x / a.position, 0.0))? / a.position;
            }
            acc
        }
        _ => {
            let r = kernel_average(kernel, |t| f.eval_raw(Complex64::new(x / t, 0.0)))?;
            r.value
        }
    };
    if value.re.is_nan() || value.im.is_nan() {
        return Err(Error::EvaluationFailure(Complex64::new(x, 0.0)));
    }
    Ok(value)
}

/// H f at upper-half-plane points: int f(z/t) phi(t) dt/t per point.
pub fn apply_holomorphic(
    kernel: &Kernel,
    f: &FunctionHandle,
    z_points: &[Complex64],
    sp: &SpaceParams,
) -> Result<Vec<Complex64>> {
    kernel.moment_absolute(sp)?;
    for &z in z_points {
        if !(z.im > 0.0) {
            return Err(Error::PointNotInUpperHalfPlane(z));
        }
    }
    z_points
        .par_iter()
        .map(|&z| apply_holomorphic_at(kernel, f, z))
        .collect()
}

pub fn apply_holomorphic_at(kernel: &Kernel, f: &FunctionHandle, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::PointNotInUpperHalfPlane(z));
    }
    let value = match kernel {
        Kernel::Atomic { atoms } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in atoms {
                acc += a.mass * f.eval(z / a.position)? / a.position;
            }
            acc
        }
        _ => kernel_average(kernel, |t| f.eval_raw(z / t))?.value,
    };
    if value.re.is_nan() || value.im.is_nan() {
        return Err(Error::EvaluationFailure(z));
    }
    Ok(value)
}

/// Discrete convolution h*(k conv g) on the kernel's grid via FFT with
/// zero-padding to 2N (linear, not circular).
pub fn apply_convolution(k: &LogKernel, g: &[Complex64]) -> Result<Vec<Complex64>> {
    if g.len() != k.grid.len {
        return Err(Error::GridMismatch(format!(
            "signal has {} samples, grid expects {}",
            g.len(),
            k.grid.len
        )));
    }
    Ok(crate::fft::linear_convolution(&k.grid, &k.values, g))
}

/// The Cesaro-like operator evaluated directly from its contour integral:
/// z^(-order) int_0^z w^(order-1) f(w) dw along the straight segment,
/// with the endpoint power singularity absorbed by substitution.
pub fn cesaro_direct(order: Complex64, f: &FunctionHandle, z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::PointNotInUpperHalfPlane(z));
    }
    if !(order.re > 0.0) {
        return Err(Error::InvalidKernel(format!(
            "cesaro order must have positive real part, got {order}"
        )));
    }
    // parametrize w = z u, u in (0,1]: the integral becomes
    // int_0^1 u^(order-1) f(zu) du; substitute u = v^(1/Re order)
    let rho = order.re;
    let floor = 1e-13;
    let integrand = |v: f64| -> Complex64 {
        let u = v.powf(1.0 / rho);
        let weight = ((order - rho) / rho * v.ln()).exp() / rho;
        weight * f.eval_raw(z * u)
    };
    let r = quad::integrate(integrand, floor, 1.0, APPLY_REL_TOL, APPLY_ABS_TOL);
    let head_bound = floor * f.eval(z * floor.powf(1.0 / rho))?.norm() / rho;
    let value = r.value;
    if value.re.is_nan() || value.im.is_nan() {
        return Err(Error::EvaluationFailure(z));
    }
    let _ = head_bound;
    Ok(value)
}

/// Truncation radii for norm quadratures.
#[derive(Debug, Clone, Copy)]
pub struct NormDomain {
    /// Line/boundary integrals run over |x| <= line_halfwidth.
    pub line_halfwidth: f64,
    /// Bergman radial integrals run over r <= plane_radius.
    pub plane_radius: f64,
}

impl Default for NormDomain {
    fn default() -> Self {
        NormDomain {
            line_halfwidth: 1e4,
            plane_radius: 1e4,
        }
    }
}

/// A computed norm: the value (tail model included when available), the
/// tail estimate that was added, and the quadrature error.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NormReport {
    pub value: f64,
    pub tail_bound: f64,
    pub quadrature_err: f64,
}

/// Weighted norm of f in the given space kind.
pub fn norm(f: &FunctionHandle, sp: &SpaceParams, domain: &NormDomain) -> Result<NormReport> {
    sp.validate()?;
    match sp.kind {
        SpaceKind::LebesgueLine | SpaceKind::HardyBoundary => line_norm(f, sp, domain),
        SpaceKind::BergmanPlane => bergman_norm(f, sp, domain),
    }
}

/// int_0^X g(x) x^a dx with the origin handled by the substitution
/// u = x^(1+a) and the rest in dyadic blocks.
fn weighted_halfline(
    g: &(dyn Fn(f64) -> f64 + Sync),
    weight_power: f64,
    x_max: f64,
) -> (f64, f64) {
    let a = weight_power;
    let mut value = 0.0;
    let mut err = 0.0;
    let head = x_max.min(1.0);
    // int_0^head g x^a dx = 1/(1+a) int_0^{head^(1+a)} g(u^(1/(1+a))) du
    let q = quad::integrate_real(
        |u| g(u.powf(1.0 / (1.0 + a))),
        0.0,
        head.powf(1.0 + a),
        1e-10,
        1e-14,
    );
    value += q.0 / (1.0 + a);
    err += q.1 / (1.0 + a);
    let mut lo = head;
    while lo < x_max {
        let hi = (2.0 * lo).min(x_max);
        let q = quad::integrate_real(|x| g(x) * x.powf(a), lo, hi, 1e-10, 1e-14);
        value += q.0;
        err += q.1;
        lo = hi;
    }
    (value, err)
}

fn line_norm(f: &FunctionHandle, sp: &SpaceParams, domain: &NormDomain) -> Result<NormReport> {
    if sp.weight_power <= -1.0 {
        return Err(Error::NonintegrableWeight(sp.weight_power));
    }
    let p = sp.exponent;
    let a = sp.weight_power;
    let x_max = domain.line_halfwidth;
    let gp = |x: f64| f.eval_raw(Complex64::new(x, 0.0)).norm().powf(p);
    let gm = |x: f64| f.eval_raw(Complex64::new(-x, 0.0)).norm().powf(p);
    let (vp, ep) = weighted_halfline(&gp, a, x_max);
    let (vm, em) = weighted_halfline(&gm, a, x_max);
    let mut total = vp + vm;
    let quadrature_err = ep + em;

    let mut tail = 0.0;
    match (f.support(), f.decay()) {
        (Some((lo, hi)), _) if lo >= -x_max && hi <= x_max => {}
        (_, Some(d)) => {
            let rate = p * d - a - 1.0;
            if rate <= 0.0 {
                return Err(Error::TruncationTooSmall(format!(
                    "p-th power tail exponent p*d - a - 1 = {rate} is not integrable"
                )));
            }
            // |f(x)| ~ c |x|^(-d): tail = c^p X^(a+1-pd)/(pd-a-1)
            let c_plus = f.eval(Complex64::new(x_max, 0.0))?.norm() * x_max.powf(d);
            let c_minus = f.eval(Complex64::new(-x_max, 0.0))?.norm() * x_max.powf(d);
            tail = (c_plus.powf(p) + c_minus.powf(p)) * x_max.powf(a + 1.0 - p * d) / rate;
            total += tail;
        }
        _ => {
            // no model: accept only if the boundary values are negligible
            let edge = f.eval(Complex64::new(x_max, 0.0))?.norm().powf(p)
                + f.eval(Complex64::new(-x_max, 0.0))?.norm().powf(p);
            tail = edge * x_max.powf(a + 1.0);
            if tail > 1e-8 * total.max(1e-300) {
                return Err(Error::TruncationTooSmall(format!(
                    "unmodelled tail estimate {tail:.3e} vs truncated integral {total:.3e}"
                )));
            }
        }
    }
    Ok(NormReport {
        value: total.powf(1.0 / p),
        tail_bound: tail,
        quadrature_err,
    })
}

fn bergman_norm(f: &FunctionHandle, sp: &SpaceParams, domain: &NormDomain) -> Result<NormReport> {
    let p = sp.exponent;
    let a = sp.weight_power;
    let r_max = domain.plane_radius;

    let radial = |theta: f64| -> (f64, f64, f64) {
        let dir = Complex64::new(theta.cos(), theta.sin());
        let g = move |r: f64| f.eval_raw(dir * r).norm().powf(p);
        let (v, e) = weighted_halfline(&g, a, r_max);
        // radial tail via the decay model
        let mut tail = 0.0;
        if let Some(d) = f.decay() {
            let rate = p * d - a - 1.0;
            if rate > 0.0 {
                let c = f.eval_raw(dir * r_max).norm() * r_max.powf(d);
                tail = c.powf(p) * r_max.powf(a + 1.0 - p * d) / rate;
            }
        }
        (v + tail, e, tail)
    };

    // int_0^pi (sin theta)^(a-1) Rad(theta) dtheta, with the endpoint
    // singularities absorbed by u = theta^a on each half
    let err_acc = std::sync::Mutex::new((0.0f64, 0.0f64)); // (quad, tail)
    let half = |mirror: bool| -> f64 {
        let r = quad::integrate_real(
            |u| {
                let theta = u.powf(1.0 / a);
                let th = if mirror {
                    std::f64::consts::PI - theta
                } else {
                    theta
                };
                let (v, e, t) = radial(th);
                {
                    let mut acc = err_acc.lock().unwrap();
                    acc.0 += e;
                    acc.1 += t;
                }
                let shape = if theta > 0.0 {
                    (theta.sin() / theta).powf(a - 1.0)
                } else {
                    1.0
                };
                shape * v / a
            },
            0.0,
            (std::f64::consts::PI / 2.0).powf(a),
            1e-8,
            1e-12,
        );
        r.0
    };
    let total = half(false) + half(true);
    let (qerr, tail) = *err_acc.lock().unwrap();
    if f.decay().is_none() && f.support().is_none() {
        let probe = f
            .eval(Complex64::new(0.0, r_max))?
            .norm()
            .powf(p)
            * r_max.powf(a + 1.0);
        if probe > 1e-8 * total.max(1e-300) {
            return Err(Error::TruncationTooSmall(format!(
                "unmodelled radial tail estimate {probe:.3e}"
            )));
        }
    }
    Ok(NormReport {
        value: total.powf(1.0 / p),
        tail_bound: tail,
        quadrature_err: qerr,
    })
}

/// int_lo^hi |s|^a ds in closed form.
pub fn interval_weight_mass(weight_power: f64, lo: f64, hi: f64) -> f64 {
    let a = weight_power;
    debug_assert!(a > -1.0);
    let antider = |x: f64| x.abs().powf(a + 1.0) / (a + 1.0) * x.signum();
    antider(hi) - antider(lo)
}

/// The pointwise growth bound [w_a(B(x,y))]^(-1/p) * norm for Hardy
/// functions.
pub fn hardy_growth_bound(norm_value: f64, sp: &SpaceParams, x: f64, y: f64) -> f64 {
    let mass = interval_weight_mass(sp.weight_power, x - y, x + y);
    mass.powf(-1.0 / sp.exponent) * norm_value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Atom;
    use crate::transform::LogGrid;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cesaro1() -> Kernel {
        Kernel::cesaro(c(1.0, 0.0)).unwrap()
    }

    fn sp20() -> SpaceParams {
        SpaceParams::lebesgue(2.0, 0.0).unwrap()
    }

    #[test]
    fn cesaro_on_unit_indicator() {
        let f = FunctionHandle::indicator(0.0, 1.0);
        let xs = [0.25, 0.5, 0.99, 1.0, 2.0, 10.0, -1.0];
        let out = apply_real(&cesaro1(), &f, &xs, &sp20()).unwrap();
        for (&x, v) in xs.iter().zip(out.iter()) {
            let expected = if x < 0.0 {
                0.0
            } else if x < 1.0 {
                1.0
            } else {
                1.0 / x
            };
            assert!(
                (v.re - expected).abs() < 1e-8,
                "x = {x}: got {v}, want {expected}"
            );
            assert!(v.im.abs() < 1e-10);
        }
    }

    #[test]
    fn atomic_identity_and_dilation() {
        let f = FunctionHandle::gaussian(0.3, 1.7);
        let id = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: 1.0,
        }])
        .unwrap();
        let dil = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: 2.0,
        }])
        .unwrap();
        let xs = [0.0, 0.77, -3.0];
        let out_id = apply_real(&id, &f, &xs, &sp20()).unwrap();
        let out_dil = apply_real(&dil, &f, &xs, &sp20()).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            assert_eq!(out_id[i], f.eval(c(x, 0.0)).unwrap());
            assert!(
                (out_dil[i] - f.eval(c(x / 2.0, 0.0)).unwrap() * 0.5).norm() < 1e-15
            );
        }
    }

    #[test]
    fn holomorphic_constant_maps_to_reciprocal_order() {
        let f = FunctionHandle::from_fn(|_| c(1.0, 0.0));
        for order in [c(1.0, 0.0), c(2.0, 1.0), c(0.7, -0.3)] {
            let k = Kernel::cesaro(order).unwrap();
            let z = [c(0.3, 1.2)];
            // moment check needs a space where the kernel is bounded
            let sp = SpaceParams::lebesgue(8.0, -0.9).unwrap();
            let out = apply_holomorphic(&k, &f, &z, &sp).unwrap();
            let expected = Complex64::new(1.0, 0.0) / order;
            assert!((out[0] - expected).norm() < 1e-8, "{order}");
        }
    }

    #[test]
    fn holomorphic_cauchy_kernel_value() {
        // f(z) = (z+i)^{-1}, order 1, z = i: -i ln 2
        let f = FunctionHandle::from_fn(|z| (z + c(0.0, 1.0)).powc(c(-1.0, 0.0)));
        let out = apply_holomorphic(&cesaro1(), &f, &[c(0.0, 1.0)], &sp20()).unwrap();
        let expected = c(0.0, -(2.0_f64.ln()));
        assert!((out[0] - expected).norm() < 1e-9, "{}", out[0]);
    }

    #[test]
    fn rejects_lower_half_plane() {
        let f = FunctionHandle::from_fn(|_| c(1.0, 0.0));
        assert!(matches!(
            apply_holomorphic(&cesaro1(), &f, &[c(0.0, -1.0)], &sp20()),
            Err(Error::PointNotInUpperHalfPlane(_))
        ));
    }

    #[test]
    fn cesaro_direct_examples() {
        let one = FunctionHandle::from_fn(|_| c(1.0, 0.0));
        for order in [c(1.0, 0.0), c(2.5, 0.0), c(1.0, 0.8)] {
            let v = cesaro_direct(order, &one, c(0.5, 1.0)).unwrap();
            assert!((v - Complex64::new(1.0, 0.0) / order).norm() < 1e-9);
        }
        let f = FunctionHandle::from_fn(|z| (z + c(0.0, 1.0)).powc(c(-1.0, 0.0)));
        let v = cesaro_direct(c(1.0, 0.0), &f, c(0.0, 1.0)).unwrap();
        assert!((v - c(0.0, -(2.0_f64.ln()))).norm() < 1e-9);
    }

    #[test]
    fn cesaro_direct_agrees_with_hausdorff_form() {
        let f = FunctionHandle::from_fn(|z| (z + c(0.0, 1.0)).powc(c(-2.0, 0.0)));
        let z = c(1.0, 1.0);
        let direct = cesaro_direct(c(1.0, 0.0), &f, z).unwrap();
        let via_kernel = apply_holomorphic(&cesaro1(), &f, &[z], &sp20()).unwrap()[0];
        assert!((direct - via_kernel).norm() < 1e-8);
    }

    #[test]
    fn line_norm_weighted_indicator() {
        // f = chi_[0,1], p = 1, a = 1: int_0^1 x dx = 1/2
        let f = FunctionHandle::indicator(0.0, 1.0);
        let sp = SpaceParams::lebesgue(1.0, 1.0).unwrap();
        let r = norm(&f, &sp, &NormDomain::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn hardy_norm_of_cauchy_power() {
        // |f(x)|^2 = (1+x^2)^{-1}: squared norm pi
        let f = FunctionHandle::from_fn(|z| (z + c(0.0, 1.0)).powc(c(-1.0, 0.0)))
            .with_decay(1.0);
        let sp = SpaceParams::hardy(2.0, 0.0).unwrap();
        let r = norm(&f, &sp, &NormDomain::default()).unwrap();
        assert!(
            (r.value.powi(2) - PI).abs() < 1e-7,
            "norm^2 = {}",
            r.value.powi(2)
        );
        assert!(r.tail_bound > 0.0);
    }

    #[test]
    fn norm_homogeneity() {
        let f = FunctionHandle::gaussian(0.0, 2.0);
        let g = f.scaled(c(3.0, 4.0));
        let sp = SpaceParams::lebesgue(2.0, 0.5).unwrap();
        let nf = norm(&f, &sp, &NormDomain::default()).unwrap().value;
        let ng = norm(&g, &sp, &NormDomain::default()).unwrap().value;
        assert!((ng - 5.0 * nf).abs() < 1e-9 * nf);
    }

    #[test]
    fn unmodelled_slow_tail_is_rejected() {
        let f = FunctionHandle::from_fn(|z| c(1.0, 0.0) / (c(1.0, 0.0) + z * z).sqrt());
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        assert!(matches!(
            norm(&f, &sp, &NormDomain::default()),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn bergman_norm_closed_form_case() {
        // p=2, a=1: |z+i|^{-3} integrates to 2 over the half-plane
        let f = FunctionHandle::from_fn(|z| (z + c(0.0, 1.0)).powc(c(-1.5, 0.0)))
            .with_decay(1.5);
        let sp = SpaceParams::bergman(2.0, 1.0).unwrap();
        let r = norm(&f, &sp, &NormDomain::default()).unwrap();
        assert!(
            (r.value.powi(2) - 2.0).abs() < 1e-5,
            "norm^2 = {}",
            r.value.powi(2)
        );
    }

    #[test]
    fn interval_weight_mass_cases() {
        // int_{-1}^{2} |s| ds = 0.5 + 2 = 2.5
        assert!((interval_weight_mass(1.0, -1.0, 2.0) - 2.5).abs() < 1e-14);
        // a = 0: plain length
        assert!((interval_weight_mass(0.0, -3.0, 4.0) - 7.0).abs() < 1e-14);
        // negative power, one-sided
        let m = interval_weight_mass(-0.5, 1.0, 4.0);
        assert!((m - 2.0 * (2.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn convolution_grid_mismatch() {
        let k = crate::transform::log_kernel(
            &cesaro1(),
            &sp20(),
            &LogGrid::new(10.0, 64).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            apply_convolution(&k, &vec![c(0.0, 0.0); 32]),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn zero_kernel_convolves_to_zero() {
        let grid = LogGrid::new(10.0, 64).unwrap();
        let k = LogKernel {
            grid,
            values: vec![c(0.0, 0.0); 64],
            l1_estimate: 0.0,
            tail_bound: 0.0,
        };
        let g: Vec<Complex64> = (0..64).map(|j| c(j as f64, -1.0)).collect();
        let out = apply_convolution(&k, &g).unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn near_delta_kernel_approximates_identity() {
        // unit-mass hat of width 2h at s = 0
        let grid = LogGrid::new(10.0, 1 << 10).unwrap();
        let h = grid.spacing();
        let j0 = grid.len / 2;
        let mut values = vec![c(0.0, 0.0); grid.len];
        values[j0] = c(1.0 / h, 0.0);
        let k = LogKernel {
            grid,
            values,
            l1_estimate: 1.0,
            tail_bound: 0.0,
        };
        let g: Vec<Complex64> = (0..grid.len)
            .map(|j| c((-(grid.node(j)).powi(2)).exp(), 0.0))
            .collect();
        let out = apply_convolution(&k, &g).unwrap();
        let max_err = out
            .iter()
            .zip(g.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        // convolution against an approximate identity: O(h^2)
        assert!(max_err < 2.0 * h * h, "max_err = {max_err:.3e}, h^2 = {:.3e}", h * h);
    }

    #[test]
    fn conjugation_between_convolution_and_direct_form() {
        use crate::transform::{self, Direction};
        let kernel = cesaro1();
        let sp = sp20();
        // S large enough that the kernel tail beyond the grid is below the
        // comparison tolerance (the linear convolution drops it)
        let grid = LogGrid::new(30.0, 1 << 13).unwrap();
        let lk = transform::log_kernel(&kernel, &sp, &grid).unwrap();
        // Gaussian bump on the log grid
        let g: Vec<Complex64> = (0..grid.len)
            .map(|j| c((-(grid.node(j) / 2.0).powi(2)).exp(), 0.0))
            .collect();
        let conv = apply_convolution(&lk, &g).unwrap();
        // quadrature path: U . H . U^{-1}
        let f = FunctionHandle::from_fn(move |z: Complex64| {
            let t = z.re;
            if t <= 0.0 {
                return c(0.0, 0.0);
            }
            let s = t.ln();
            // U^{-1} g (x) = x^{-beta} g(ln x)
            c((-(s / 2.0).powi(2)).exp(), 0.0) * t.powf(-0.5)
        });
        let t_nodes = grid.geometric_nodes();
        let direct = apply_real(&kernel, &f, &t_nodes, &sp).unwrap();
        let lifted = transform::unitary(Direction::Forward, &direct, &sp, &grid).unwrap();
        let scale = conv.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let max_err = conv
            .iter()
            .zip(lifted.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(
            max_err < 1e-5 * scale,
            "max_err = {max_err:.3e}, scale = {scale:.3e}"
        );
    }
}

//! Kernel descriptions for Hausdorff operators: closed-form families,
//! sampled tables and finite atomic measures, together with their weighted
//! moments and truncations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::space::SpaceParams;

/// One point mass of an atomic kernel measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub mass: Complex64,
    pub position: f64,
}

/// A kernel defining a Hausdorff operator.  All variants have support
/// strictly inside (0, inf).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Kernel {
    /// t^(-order) on [1, inf); the kernel of the Cesaro-like operator.
    Cesaro {
        #[serde(rename = "nu", with = "c64_pair")]
        order: Complex64,
    },
    /// t^exponent restricted to [lower, upper); upper may be +inf.
    #[serde(rename = "powercut")]
    PowerCut {
        #[serde(with = "c64_pair")]
        exponent: Complex64,
        #[serde(rename = "lo")]
        lower: f64,
        #[serde(rename = "hi", with = "inf_or_f64")]
        upper: f64,
    },
    /// Piecewise-linear table on ascending positive nodes, zero outside.
    Sampled {
        #[serde(rename = "t")]
        nodes: Vec<f64>,
        #[serde(with = "c64_pair_vec")]
        values: Vec<Complex64>,
    },
    /// Finite sum of point masses.
    Atomic { atoms: Vec<Atom> },
    /// inner restricted to [delta, 1/delta).
    Truncated { inner: Box<Kernel>, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMode {
    Signed,
    Absolute,
}

/// A weighted moment together with its quadrature error estimate
/// (zero for closed-form and atomic evaluations).
#[derive(Debug, Clone, Copy)]
pub struct Moment {
    pub value: Complex64,
    pub abs_err: f64,
}

/// Which one-sided limit to take at a potential jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Half-open restriction window [lo, hi) used by truncation and tail
/// accounting.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn full() -> Self {
        Window {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }

    pub fn intersect(&self, other: &Window) -> Window {
        Window {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }
}

/// One smooth piece of s -> phi(e^s).  `s_hi` may be infinite, in which
/// case `decay_rate` bounds the exponential decay of |phi(e^s)|.
#[derive(Debug, Clone, Copy)]
pub struct LogPiece {
    pub s_lo: f64,
    pub s_hi: f64,
    pub decay_rate: f64,
}

fn complex_power(base: f64, c: Complex64) -> Complex64 {
    debug_assert!(base > 0.0);
    (c * base.ln()).exp()
}

impl Kernel {
    pub fn cesaro(order: Complex64) -> Result<Self> {
        let k = Kernel::Cesaro { order };
        k.validate()?;
        Ok(k)
    }

    pub fn power_cut(exponent: Complex64, lower: f64, upper: f64) -> Result<Self> {
        let k = Kernel::PowerCut {
            exponent,
            lower,
            upper,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn sampled(nodes: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        let k = Kernel::Sampled { nodes, values };
        k.validate()?;
        Ok(k)
    }

    pub fn atomic(atoms: Vec<Atom>) -> Result<Self> {
        let k = Kernel::Atomic { atoms };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::Cesaro { order } => {
                if order.re <= 0.0 {
                    return Err(Error::InvalidKernel(format!(
                        "cesaro order must have positive real part, got {order}"
                    )));
                }
            }
            Kernel::PowerCut { lower, upper, .. } => {
                if !(*lower > 0.0) {
                    return Err(Error::NonPositiveSupport(format!(
                        "powercut lower bound {lower}"
                    )));
                }
                if !(*upper > *lower) {
                    return Err(Error::InvalidKernel(format!(
                        "powercut bounds must satisfy lo < hi, got [{lower}, {upper})"
                    )));
                }
            }
            Kernel::Sampled { nodes, values } => {
                if nodes.len() < 2 {
                    return Err(Error::InvalidKernel(
                        "sampled kernel needs at least two nodes".into(),
                    ));
                }
                if nodes.len() != values.len() {
                    return Err(Error::InvalidKernel(format!(
                        "sampled kernel has {} nodes but {} values",
                        nodes.len(),
                        values.len()
                    )));
                }
                if !(nodes[0] > 0.0) {
                    return Err(Error::NonPositiveSupport(format!(
                        "sampled node {}",
                        nodes[0]
                    )));
                }
                if nodes.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(Error::InvalidKernel(
                        "sampled nodes must be strictly ascending".into(),
                    ));
                }
            }
            Kernel::Atomic { atoms } => {
                for a in atoms {
                    if !(a.position > 0.0) {
                        return Err(Error::NonPositiveSupport(format!(
                            "atom position {}",
                            a.position
                        )));
                    }
                }
                let mut pos: Vec<f64> = atoms.iter().map(|a| a.position).collect();
                pos.sort_by(|x, y| x.partial_cmp(y).unwrap());
                if pos.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidKernel("atom positions must be distinct".into()));
                }
            }
            Kernel::Truncated { inner, delta } => {
                if !(*delta > 0.0 && *delta < 1.0) {
                    return Err(Error::InvalidDelta(*delta));
                }
                if matches!(**inner, Kernel::Atomic { .. }) {
                    return Err(Error::InvalidKernel(
                        "truncate atomic kernels by position filtering instead".into(),
                    ));
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Kernel::Atomic { .. })
    }

    /// True when every atomic mass is a nonnegative real: the measure is
    /// positive in the classical sense.  Always true for non-atomic kernels.
    pub fn nonnegative_real_masses(&self) -> bool {
        match self {
            Kernel::Atomic { atoms } => atoms.iter().all(|a| a.mass.im == 0.0 && a.mass.re >= 0.0),
            _ => true,
        }
    }

    /// Support interval [lo, hi) in t (hi may be +inf).
    pub fn support(&self) -> (f64, f64) {
        match self {
            Kernel::Cesaro { .. } => (1.0, f64::INFINITY),
            Kernel::PowerCut { lower, upper, .. } => (*lower, *upper),
            Kernel::Sampled { nodes, .. } => (nodes[0], *nodes.last().unwrap()),
            Kernel::Atomic { atoms } => {
                let lo = atoms
                    .iter()
                    .map(|a| a.position)
                    .fold(f64::INFINITY, f64::min);
                let hi = atoms.iter().map(|a| a.position).fold(0.0, f64::max);
                (lo, hi)
            }
            Kernel::Truncated { inner, delta } => {
                let (lo, hi) = inner.support();
                (lo.max(*delta), hi.min(1.0 / delta))
            }
        }
    }

    /// Pointwise value of the kernel density (half-open indicators).
    /// Atomic kernels have no density and evaluate to zero.
    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_windowed(t, &Window::full())
    }

    fn eval_windowed(&self, t: f64, window: &Window) -> Complex64 {
        if t <= 0.0 || t < window.lo || t >= window.hi {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Kernel::Cesaro { order } => {
                if t >= 1.0 {
                    complex_power(t, -order)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::PowerCut {
                exponent,
                lower,
                upper,
            } => {
                if t >= *lower && t < *upper {
                    complex_power(t, *exponent)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::Sampled { nodes, values } => sampled_interp(nodes, values, t),
            Kernel::Atomic { .. } => Complex64::new(0.0, 0.0),
            Kernel::Truncated { inner, delta } => {
                let w = Window::new(*delta, 1.0 / delta);
                if t >= w.lo && t < w.hi {
                    inner.eval_windowed(t, window)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    /// One-sided limit of the density at t.
    pub fn eval_side(&self, t: f64, side: Side) -> Complex64 {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self {
            Kernel::Cesaro { order } => {
                let inside = match side {
                    Side::Left => t > 1.0,
                    Side::Right => t >= 1.0,
                };
                if inside {
                    complex_power(t, -order)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::PowerCut {
                exponent,
                lower,
                upper,
            } => {
                let inside = match side {
                    Side::Left => t > *lower && t <= *upper,
                    Side::Right => t >= *lower && t < *upper,
                };
                if inside {
                    complex_power(t, *exponent)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::Sampled { nodes, values } => {
                let first = nodes[0];
                let last = *nodes.last().unwrap();
                let inside = match side {
                    Side::Left => t > first && t <= last,
                    Side::Right => t >= first && t < last,
                };
                if inside {
                    sampled_interp(nodes, values, t)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Kernel::Atomic { .. } => Complex64::new(0.0, 0.0),
            Kernel::Truncated { inner, delta } => {
                let lo = *delta;
                let hi = 1.0 / delta;
                let inside = match side {
                    Side::Left => t > lo && t <= hi,
                    Side::Right => t >= lo && t < hi,
                };
                if inside {
                    inner.eval_side(t, side)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    /// Value used when sampling the kernel on a grid: the mean of the two
    /// one-sided limits.  At continuity points this equals `eval`; at jump
    /// points it is the midpoint, which keeps trapezoidal sums and DFT
    /// symbols second-order accurate.
    pub fn grid_sample(&self, t: f64) -> Complex64 {
        (self.eval_side(t, Side::Left) + self.eval_side(t, Side::Right)) * 0.5
    }

    /// Restriction of the kernel to [delta, 1/delta).  Atomic kernels are
    /// filtered by position; everything else is wrapped.
    pub fn truncate(&self, delta: f64) -> Result<Kernel> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDelta(delta));
        }
        match self {
            Kernel::Atomic { atoms } => {
                let kept: Vec<Atom> = atoms
                    .iter()
                    .copied()
                    .filter(|a| a.position >= delta && a.position < 1.0 / delta)
                    .collect();
                Ok(Kernel::Atomic { atoms: kept })
            }
            other => Ok(Kernel::Truncated {
                inner: Box::new(other.clone()),
                delta,
            }),
        }
    }

    /// Weighted moment of the kernel against t^(beta-1) where beta is the
    /// space's dilation exponent: the signed or absolute boundedness
    /// integral.
    pub fn moment(&self, sp: &SpaceParams, mode: MomentMode) -> Result<Moment> {
        self.moment_windowed(sp, mode, &Window::full())
    }

    pub fn moment_signed(&self, sp: &SpaceParams) -> Result<Moment> {
        self.moment(sp, MomentMode::Signed)
    }

    pub fn moment_absolute(&self, sp: &SpaceParams) -> Result<Moment> {
        self.moment(sp, MomentMode::Absolute)
    }

    pub(crate) fn moment_windowed(
        &self,
        sp: &SpaceParams,
        mode: MomentMode,
        window: &Window,
    ) -> Result<Moment> {
        let dexp = sp.dilation_exponent();
        match mode {
            MomentMode::Signed => {
                let (value, abs_err) =
                    self.weighted_transform_windowed(Complex64::new(dexp, 0.0), window)?;
                Ok(Moment { value, abs_err })
            }
            MomentMode::Absolute => {
                let (value, abs_err) = self.absolute_moment_windowed(dexp, window)?;
                Ok(Moment {
                    value: Complex64::new(value, 0.0),
                    abs_err,
                })
            }
        }
    }

    /// Exact evaluation of int phi(t) t^(c-1) dt over the window, for any
    /// complex weight exponent c.  Shared by signed moments (c = beta) and
    /// closed-form symbols (c = beta - i xi).
    pub(crate) fn weighted_transform_windowed(
        &self,
        c: Complex64,
        window: &Window,
    ) -> Result<(Complex64, f64)> {
        if window.is_empty() {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        match self {
            Kernel::Cesaro { order } => {
                let lo = window.lo.max(1.0);
                let hi = window.hi;
                if !(lo < hi) {
                    return Ok((Complex64::new(0.0, 0.0), 0.0));
                }
                quad::power_integral(c - order, lo, hi)
                    .map(|v| (v, 0.0))
                    .ok_or_else(|| {
                        Error::DivergentMoment(format!(
                            "cesaro tail with weight exponent {}, order {order}",
                            c.re
                        ))
                    })
            }
            Kernel::PowerCut {
                exponent,
                lower,
                upper,
            } => {
                let lo = window.lo.max(*lower);
                let hi = window.hi.min(*upper);
                if !(lo < hi) {
                    return Ok((Complex64::new(0.0, 0.0), 0.0));
                }
                quad::power_integral(c + exponent, lo, hi)
                    .map(|v| (v, 0.0))
                    .ok_or_else(|| {
                        Error::DivergentMoment(format!(
                            "powercut tail with combined exponent {}",
                            (c + exponent).re
                        ))
                    })
            }
            Kernel::Sampled { nodes, values } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..nodes.len() - 1 {
                    let (t0, t1) = (nodes[i], nodes[i + 1]);
                    let lo = window.lo.max(t0);
                    let hi = window.hi.min(t1);
                    if !(lo < hi) {
                        continue;
                    }
                    let slope = (values[i + 1] - values[i]) / (t1 - t0);
                    let offset = values[i] - slope * t0;
                    let p0 = quad::power_integral(c, lo, hi).unwrap();
                    let p1 = quad::power_integral(c + 1.0, lo, hi).unwrap();
                    acc += offset * p0 + slope * p1;
                }
                // roundoff-level estimate
                Ok((acc, 1e-14 * acc.norm() * nodes.len() as f64))
            }
            Kernel::Atomic { atoms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in atoms {
                    if a.position >= window.lo && a.position < window.hi {
                        acc += a.mass * complex_power(a.position, c - 1.0);
                    }
                }
                Ok((acc, 0.0))
            }
            Kernel::Truncated { inner, delta } => {
                let w = window.intersect(&Window::new(*delta, 1.0 / delta));
                inner.weighted_transform_windowed(c, &w)
            }
        }
    }

    fn absolute_moment_windowed(&self, dexp: f64, window: &Window) -> Result<(f64, f64)> {
        if window.is_empty() {
            return Ok((0.0, 0.0));
        }
        match self {
            Kernel::Cesaro { order } => {
                let lo = window.lo.max(1.0);
                let hi = window.hi;
                if !(lo < hi) {
                    return Ok((0.0, 0.0));
                }
                quad::power_integral(Complex64::new(dexp - order.re, 0.0), lo, hi)
                    .map(|v| (v.re, 0.0))
                    .ok_or_else(|| {
                        Error::DivergentMoment(format!(
                            "cesaro requires p*Re(nu) > a+1, got weight exponent {dexp} vs {}",
                            order.re
                        ))
                    })
            }
            Kernel::PowerCut {
                exponent,
                lower,
                upper,
            } => {
                let lo = window.lo.max(*lower);
                let hi = window.hi.min(*upper);
                if !(lo < hi) {
                    return Ok((0.0, 0.0));
                }
                quad::power_integral(Complex64::new(dexp + exponent.re, 0.0), lo, hi)
                    .map(|v| (v.re, 0.0))
                    .ok_or_else(|| {
                        Error::DivergentMoment(format!(
                            "powercut tail with combined exponent {}",
                            dexp + exponent.re
                        ))
                    })
            }
            Kernel::Sampled { nodes, values } => {
                let mut acc = 0.0;
                let mut err = 0.0;
                for i in 0..nodes.len() - 1 {
                    let (t0, t1) = (nodes[i], nodes[i + 1]);
                    let lo = window.lo.max(t0);
                    let hi = window.hi.min(t1);
                    if !(lo < hi) {
                        continue;
                    }
                    let slope = (values[i + 1] - values[i]) / (t1 - t0);
                    let base = values[i];
                    let r = quad::integrate(
                        |t| {
                            let v = base + slope * (t - t0);
                            Complex64::new(v.norm() * t.powf(dexp - 1.0), 0.0)
                        },
                        lo,
                        hi,
                        1e-12,
                        1e-16,
                    );
                    acc += r.value.re;
                    err += r.abs_err;
                }
                Ok((acc, err))
            }
            Kernel::Atomic { atoms } => {
                let mut acc = 0.0;
                for a in atoms {
                    if a.position >= window.lo && a.position < window.hi {
                        acc += a.mass.norm() * a.position.powf(dexp - 1.0);
                    }
                }
                Ok((acc, 0.0))
            }
            Kernel::Truncated { inner, delta } => {
                let w = window.intersect(&Window::new(*delta, 1.0 / delta));
                inner.absolute_moment_windowed(dexp, &w)
            }
        }
    }

    /// Smooth pieces of s -> phi(e^s) for quadrature in the log variable.
    pub fn log_pieces(&self) -> Result<Vec<LogPiece>> {
        match self {
            Kernel::Cesaro { order } => Ok(vec![LogPiece {
                s_lo: 0.0,
                s_hi: f64::INFINITY,
                decay_rate: order.re,
            }]),
            Kernel::PowerCut {
                exponent,
                lower,
                upper,
            } => Ok(vec![LogPiece {
                s_lo: lower.ln(),
                s_hi: upper.ln(),
                decay_rate: -exponent.re,
            }]),
            Kernel::Sampled { nodes, .. } => Ok(vec![LogPiece {
                s_lo: nodes[0].ln(),
                s_hi: nodes.last().unwrap().ln(),
                decay_rate: 0.0,
            }]),
            Kernel::Atomic { .. } => Err(Error::AtomicKernelUnsupported),
            Kernel::Truncated { inner, delta } => {
                let s_lo_cut = delta.ln();
                let s_hi_cut = -delta.ln();
                Ok(inner
                    .log_pieces()?
                    .into_iter()
                    .filter_map(|p| {
                        let s_lo = p.s_lo.max(s_lo_cut);
                        let s_hi = p.s_hi.min(s_hi_cut);
                        (s_lo < s_hi).then_some(LogPiece {
                            s_lo,
                            s_hi,
                            decay_rate: p.decay_rate,
                        })
                    })
                    .collect())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Kernel> {
        let k: Kernel =
            serde_json::from_str(text).map_err(|e| Error::InvalidKernel(e.to_string()))?;
        k.validate()?;
        Ok(k)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("kernel serialization cannot fail")
    }
}

fn sampled_interp(nodes: &[f64], values: &[Complex64], t: f64) -> Complex64 {
    let first = nodes[0];
    let last = *nodes.last().unwrap();
    if t < first || t > last {
        return Complex64::new(0.0, 0.0);
    }
    let i = match nodes.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
        Ok(i) => return values[i],
        Err(i) => i - 1,
    };
    let w = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
    values[i] * (1.0 - w) + values[i + 1] * w
}

mod c64_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

mod c64_pair_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

mod inf_or_f64 {
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            "inf".serialize(s)
        } else {
            v.serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Repr::Word(w) => Err(D::Error::custom(format!("expected number or \"inf\", got {w}"))),
        }
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.mass.re, self.mass.im, self.position].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im, t] = <[f64; 3]>::deserialize(d)?;
        Ok(Atom {
            mass: Complex64::new(re, im),
            position: t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SpaceParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force quadrature of the absolute moment, independent of the
    /// closed forms above.
    fn oracle_absolute_moment(k: &Kernel, sp: &SpaceParams, t_max: f64) -> f64 {
        let dexp = sp.dilation_exponent();
        let (lo, hi) = k.support();
        let hi = hi.min(t_max);
        let r = quad::integrate(
            |s| {
                let t = s.exp();
                Complex64::new(k.eval(t).norm() * (dexp * s).exp(), 0.0)
            },
            lo.ln(),
            hi.ln(),
            1e-12,
            1e-15,
        );
        r.value.re
    }

    #[test]
    fn cesaro_absolute_moment_matches_oracle() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let m = k.moment_absolute(&sp).unwrap();
        // oracle on [1, T] plus the analytic tail 2/sqrt(T)
        let t_max = 1e8;
        let oracle = oracle_absolute_moment(&k, &sp, t_max) + 2.0 / t_max.sqrt();
        assert!((m.value.re - 2.0).abs() < 1e-12);
        assert!((m.value.re - oracle).abs() < 1e-7);
    }

    #[test]
    fn cesaro_order_two_p1_moment() {
        let k = Kernel::cesaro(c(2.0, 0.0)).unwrap();
        let sp = SpaceParams::lebesgue(1.0, 0.0).unwrap();
        let m = k.moment_absolute(&sp).unwrap();
        assert!((m.value.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn atomic_unit_mass_signed_moment() {
        let k = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: 1.0,
        }])
        .unwrap();
        for (p, a) in [(2.0, 0.0), (1.0, 0.5), (3.0, 2.0)] {
            let sp = SpaceParams::lebesgue(p, a).unwrap();
            let m = k.moment_signed(&sp).unwrap();
            assert_eq!(m.value, c(1.0, 0.0));
            assert_eq!(m.abs_err, 0.0);
        }
    }

    #[test]
    fn divergent_moment_detected() {
        let k = Kernel::cesaro(c(0.5, 0.0)).unwrap();
        // p Re nu = 1 = a + 1: boundary case diverges
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        assert!(matches!(
            k.moment_absolute(&sp),
            Err(Error::DivergentMoment(_))
        ));
    }

    #[test]
    fn truncate_cesaro_quarter() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let kt = k.truncate(0.25).unwrap();
        let m = kt.moment_absolute(&sp).unwrap();
        // int_1^4 t^{-3/2} dt = 2 - 2/sqrt(4)
        assert!((m.value.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn truncate_keeps_interior_atom() {
        let k = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: 1.0,
        }])
        .unwrap();
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let kt = k.truncate(0.5).unwrap();
        let m0 = k.moment_signed(&sp).unwrap();
        let m1 = kt.moment_signed(&sp).unwrap();
        assert_eq!(m0.value, m1.value);
    }

    #[test]
    fn truncation_moment_gap_shrinks() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();
        let full = k.moment_absolute(&sp).unwrap().value.re;
        let coarse = k
            .truncate(0.9)
            .unwrap()
            .moment_absolute(&sp)
            .unwrap()
            .value
            .re;
        let fine = k
            .truncate(0.1)
            .unwrap()
            .moment_absolute(&sp)
            .unwrap()
            .value
            .re;
        assert!((full - coarse).abs() > (full - fine).abs());
        assert!(full >= fine && fine >= coarse);
    }

    #[test]
    fn sampled_signed_moment_matches_oracle() {
        // tent on [1, 3] peaking at 2 with value 1+0.5i
        let k = Kernel::sampled(
            vec![1.0, 2.0, 3.0],
            vec![c(0.0, 0.0), c(1.0, 0.5), c(0.0, 0.0)],
        )
        .unwrap();
        let sp = SpaceParams::lebesgue(2.0, 1.0).unwrap();
        let m = k.moment_signed(&sp).unwrap();
        let oracle = quad::integrate(
            |t| k.eval(t) * Complex64::new(t.powf(sp.dilation_exponent() - 1.0), 0.0),
            1.0,
            3.0,
            1e-13,
            1e-15,
        );
        assert!((m.value - oracle.value).norm() < 1e-10);
    }

    #[test]
    fn midpoint_sampling_at_jumps() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        assert_eq!(k.eval(1.0), c(1.0, 0.0));
        assert_eq!(k.grid_sample(1.0), c(0.5, 0.0));
        assert_eq!(k.grid_sample(2.0), k.eval(2.0));

        let pc = Kernel::power_cut(c(0.0, 0.0), 1.0, std::f64::consts::E).unwrap();
        assert_eq!(pc.grid_sample(1.0), c(0.5, 0.0));
        assert_eq!(pc.grid_sample(std::f64::consts::E), c(0.5, 0.0));
    }

    #[test]
    fn absolute_dominates_signed() {
        let kernels = vec![
            Kernel::cesaro(c(1.5, 0.7)).unwrap(),
            Kernel::power_cut(c(-1.0, 2.0), 0.3, 5.0).unwrap(),
            Kernel::sampled(
                vec![0.5, 1.0, 2.0, 4.0],
                vec![c(1.0, -1.0), c(-2.0, 0.5), c(0.3, 0.3), c(0.0, 1.0)],
            )
            .unwrap(),
            Kernel::atomic(vec![
                Atom {
                    mass: c(0.5, -0.2),
                    position: 0.4,
                },
                Atom {
                    mass: c(-1.0, 0.0),
                    position: 2.5,
                },
            ])
            .unwrap(),
        ];
        let sp = SpaceParams::lebesgue(2.0, 0.5).unwrap();
        for k in kernels {
            let s = k.moment_signed(&sp).unwrap();
            let a = k.moment_absolute(&sp).unwrap();
            assert!(
                a.value.re + a.abs_err + s.abs_err >= s.value.norm(),
                "kernel {k:?}"
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let kernels = vec![
            Kernel::cesaro(c(2.0, 1.0)).unwrap(),
            Kernel::power_cut(c(-1.0, 0.0), 0.5, f64::INFINITY).unwrap(),
            Kernel::sampled(vec![1.0, 2.0], vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap(),
            Kernel::atomic(vec![Atom {
                mass: c(1.0, 0.0),
                position: 2.718,
            }])
            .unwrap(),
            Kernel::cesaro(c(1.0, 0.0)).unwrap().truncate(0.25).unwrap(),
        ];
        for k in kernels {
            let text = k.to_json();
            let back = Kernel::from_json(&text).unwrap();
            assert_eq!(k, back, "{text}");
        }
    }

    #[test]
    fn json_schema_shapes() {
        let k = Kernel::from_json(r#"{"variant":"cesaro","nu":[1.0,0.0]}"#).unwrap();
        assert_eq!(k, Kernel::cesaro(c(1.0, 0.0)).unwrap());
        let k = Kernel::from_json(
            r#"{"variant":"powercut","exponent":[0.0,0.0],"lo":1.0,"hi":"inf"}"#,
        )
        .unwrap();
        assert!(matches!(k, Kernel::PowerCut { upper, .. } if upper.is_infinite()));
        let k = Kernel::from_json(r#"{"variant":"atomic","atoms":[[1.0,0.0,1.0],[0.5,-0.5,2.0]]}"#)
            .unwrap();
        assert!(matches!(k, Kernel::Atomic { ref atoms } if atoms.len() == 2));
        let k = Kernel::from_json(
            r#"{"variant":"truncated","inner":{"variant":"cesaro","nu":[1.0,0.0]},"delta":0.25}"#,
        )
        .unwrap();
        assert!(matches!(k, Kernel::Truncated { .. }));
        // invalid: mass at the origin
        assert!(Kernel::from_json(r#"{"variant":"atomic","atoms":[[1.0,0.0,0.0]]}"#).is_err());
    }
}

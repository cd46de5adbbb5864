//! The approximate-eigenfunction machinery: power test functions on the
//! half-plane, their norm asymptotics, relative eigen-residuals and the
//! symbol-sup lower bound for the operator norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::operator::{self, FunctionHandle, NormDomain};
use crate::space::{SpaceKind, SpaceParams};
use crate::symbol;

/// Parameters of the test function (z+i)^(-(beta+epsilon)+i xi).
#[derive(Debug, Clone, Copy)]
pub struct TestFunctionParams {
    pub epsilon: f64,
    pub xi: f64,
    pub space: SpaceParams,
}

impl TestFunctionParams {
    pub fn new(epsilon: f64, xi: f64, space: SpaceParams) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        Ok(TestFunctionParams { epsilon, xi, space })
    }
}

/// The principal-branch power test function.  Finite on the closed upper
/// half-plane; modulus decays like |z|^-(beta+epsilon).
pub fn test_function(params: &TestFunctionParams) -> FunctionHandle {
    let w = Complex64::new(
        -(params.space.dilation_exponent() + params.epsilon),
        params.xi,
    );
    FunctionHandle::from_fn(move |z| (z + Complex64::new(0.0, 1.0)).powc(w))
        .with_decay(params.space.dilation_exponent() + params.epsilon)
}

/// One row of the norm-asymptotics table.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AsymptoticsRow {
    pub epsilon: f64,
    pub norm: f64,
    /// norm * epsilon^(1/p); bounded above and below across the sweep.
    pub scaled: f64,
}

/// Norms of the test functions over a descending epsilon sweep, with the
/// compensated column norm * eps^(1/p).
pub fn norm_asymptotics(
    space: &SpaceParams,
    xi: f64,
    epsilons: &[f64],
    domain: &NormDomain,
) -> Result<Vec<AsymptoticsRow>> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let params = TestFunctionParams::new(epsilon, xi, *space)?;
            let f = test_function(&params);
            let n = operator::norm(&f, space, domain)?;
            Ok(AsymptoticsRow {
                epsilon,
                norm: n.value,
                scaled: n.value * epsilon.powf(1.0 / space.exponent),
            })
        })
        .collect()
}

/// Relative residual ||H f - symbol(xi) f|| / ||f|| for the test function.
/// Hardy and Lebesgue residuals are computed on the boundary; Bergman
/// residuals on the plane.
pub fn eigen_residual(
    kernel: &Kernel,
    params: &TestFunctionParams,
    domain: &NormDomain,
) -> Result<f64> {
    kernel.moment_absolute(&params.space)?;
    let f = test_function(params);
    let symbol_value = symbol::symbol_at(kernel, &params.space, params.xi)?.value;
    let decay = params.space.dilation_exponent() + params.epsilon;

    let g = match params.space.kind {
        SpaceKind::LebesgueLine | SpaceKind::HardyBoundary => {
            let kernel = kernel.clone();
            let f_inner = f.clone();
            FunctionHandle::from_fn(move |z| {
                let x = z.re;
                match operator::apply_real_at(&kernel, &f_inner, x) {
                    Ok(v) => v - symbol_value * f_inner.eval_raw(Complex64::new(x, 0.0)),
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            })
            .with_decay(decay)
        }
        SpaceKind::BergmanPlane => {
            let kernel = kernel.clone();
            let f_inner = f.clone();
            FunctionHandle::from_fn(move |z| {
                match operator::apply_holomorphic_at(&kernel, &f_inner, z) {
                    Ok(v) => v - symbol_value * f_inner.eval_raw(z),
                    Err(_) => Complex64::new(f64::NAN, f64::NAN),
                }
            })
            .with_decay(decay)
        }
    };

    let num = operator::norm(&g, &params.space, domain)?;
    let den = operator::norm(&f, &params.space, domain)?;
    if !num.value.is_finite() || !den.value.is_finite() || den.value == 0.0 {
        return Err(Error::EvaluationFailure(Complex64::new(params.xi, 0.0)));
    }
    Ok(num.value / den.value)
}

/// Norm bounds from both sides: sup |symbol| <= ||H|| <= absolute moment,
/// with the signed moment's modulus folded into the lower bound.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub sup_modulus: f64,
    pub signed_modulus: f64,
}

pub fn norm_bounds(kernel: &Kernel, sp: &SpaceParams) -> Result<NormBounds> {
    let signed = kernel.moment_signed(sp)?.value.norm();
    let upper = kernel.moment_absolute(sp)?.value.re;
    let (sup_modulus, _) = symbol::sup_modulus_refined(kernel, sp, &symbol::default_xi_nodes())?;
    Ok(NormBounds {
        lower: signed.max(sup_modulus),
        upper,
        sup_modulus,
        signed_modulus: signed,
    })
}

/// The symbol-sup lower bound for the operator norm.
pub fn lower_norm_bound(kernel: &Kernel, sp: &SpaceParams) -> Result<f64> {
    Ok(norm_bounds(kernel, sp)?.lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Atom;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hardy20() -> SpaceParams {
        SpaceParams::hardy(2.0, 0.0).unwrap()
    }

    #[test]
    fn test_function_point_values() {
        // eps = 1/2, xi = 0, p = 2, a = 0: f(0) = i^{-1} = -i
        let params = TestFunctionParams::new(0.5, 0.0, hardy20()).unwrap();
        let f = test_function(&params);
        let v = f.eval(c(0.0, 0.0)).unwrap();
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
        // at z = i: modulus 2^{-(beta+eps)} e^{-xi pi/2}
        for xi in [0.0, 1.5, -2.0] {
            let params = TestFunctionParams::new(0.25, xi, hardy20()).unwrap();
            let f = test_function(&params);
            let v = f.eval(c(0.0, 1.0)).unwrap();
            let expected = 2.0_f64.powf(-0.75) * (-xi * std::f64::consts::FRAC_PI_2).exp();
            assert!((v.norm() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn modulus_factorizes_in_xi() {
        // |f_{eps,xi}(z)| = |f_{eps,0}(z)| e^{-xi arg(z+i)}
        let sp = hardy20();
        let f0 = test_function(&TestFunctionParams::new(0.3, 0.0, sp).unwrap());
        let f3 = test_function(&TestFunctionParams::new(0.3, 3.0, sp).unwrap());
        for z in [c(0.7, 0.2), c(-2.0, 1.0), c(10.0, 0.0)] {
            let arg = (z + c(0.0, 1.0)).arg();
            let lhs = f3.eval(z).unwrap().norm();
            let rhs = f0.eval(z).unwrap().norm() * (-3.0 * arg).exp();
            assert!((lhs - rhs).abs() < 1e-13 * rhs.max(1e-12));
        }
    }

    #[test]
    fn rejects_out_of_range_epsilon() {
        assert!(TestFunctionParams::new(0.0, 0.0, hardy20()).is_err());
        assert!(TestFunctionParams::new(1.0, 0.0, hardy20()).is_err());
    }

    #[test]
    fn hardy_norm_anchor_at_half() {
        // eps = 1/2: squared norm = pi, so norm * sqrt(eps) = sqrt(pi/2)
        let rows = norm_asymptotics(&hardy20(), 0.0, &[0.5], &NormDomain::default()).unwrap();
        let expected = (std::f64::consts::PI / 2.0).sqrt();
        assert!(
            (rows[0].scaled - expected).abs() < 1e-6,
            "scaled = {}",
            rows[0].scaled
        );
    }

    #[test]
    fn identity_atom_residual_vanishes() {
        let id = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: 1.0,
        }])
        .unwrap();
        for (eps, xi) in [(0.5, 0.0), (0.1, 2.0)] {
            let params = TestFunctionParams::new(eps, xi, hardy20()).unwrap();
            let r = eigen_residual(&id, &params, &NormDomain::default()).unwrap();
            assert!(r < 1e-12, "residual = {r:.3e}");
        }
    }

    #[test]
    fn cesaro_lower_bound_is_two() {
        let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
        let b = norm_bounds(&k, &hardy20()).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-9);
        assert!((b.upper - 2.0).abs() < 1e-12);
        assert!(b.lower <= b.upper + 1e-9);
    }

    #[test]
    fn single_atom_lower_bound() {
        let k = Kernel::atomic(vec![Atom {
            mass: c(1.0, 0.0),
            position: std::f64::consts::E,
        }])
        .unwrap();
        let b = norm_bounds(&k, &hardy20()).unwrap();
        assert!((b.lower - (-0.5_f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn zero_kernel_lower_bound() {
        let k = Kernel::sampled(vec![1.0, 2.0], vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = norm_bounds(&k, &hardy20()).unwrap();
        assert_eq!(b.lower, 0.0);
        assert_eq!(b.upper, 0.0);
    }
}

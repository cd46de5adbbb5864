// temporary diagnostics; deleted before shipping
use hsl::kernel::Kernel;
use hsl::operator;
use hsl::space::SpaceParams;
use hsl::spectra;
use hsl::symbol;
use hsl::transform::{self, Direction, LogGrid};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let k = Kernel::cesaro(c(1.0, 0.0)).unwrap();
    let sp = SpaceParams::lebesgue(2.0, 0.0).unwrap();

    // 1. circulant eigenvalue vs exact symbol, varying grids
    for (s, n) in [(20.0, 1 << 14), (20.0, 1 << 16), (30.0, 1 << 16), (30.0, 1 << 18), (40.0, 1 << 18)] {
        let grid = LogGrid::new(s, n).unwrap();
        let lk = transform::log_kernel_periodized(&k, &sp, &grid).unwrap();
        let spec = spectra::circulant_spectrum(&lk);
        let mut worst = 0.0f64;
        let mut worst_xi = 0.0;
        let mut worst_circle = 0.0f64;
        for (i, &xi) in spec.xi.iter().enumerate() {
            let exact = symbol::symbol_at(&k, &sp, xi).unwrap().value;
            let d = (spec.eigenvalues[i] - exact).norm();
            if d > worst {
                worst = d;
                worst_xi = xi;
            }
            let dc = ((spec.eigenvalues[i] - c(1.0, 0.0)).norm() - 1.0).abs();
            worst_circle = worst_circle.max(dc);
        }
        println!(
            "S={s} N=2^{} : worst |eig - khat| = {worst:.3e} at xi={worst_xi:.2}, worst circle dev = {worst_circle:.3e}, h = {:.3e}",
            n.ilog2(),
            grid.spacing()
        );
    }

    // 2. two-sided hausdorff in spectral_verify at several grids
    for (s, n) in [(20.0, 1 << 14), (30.0, 1 << 16), (40.0, 1 << 17)] {
        let grid = LogGrid::new(s, n).unwrap();
        let rep = spectra::spectral_verify(&k, &sp, &grid, 1e-4).unwrap();
        println!(
            "S={s} N=2^{}: hausdorff = {:.3e}, pass = {}",
            n.ilog2(),
            rep.hausdorff_distance,
            rep.pass
        );
    }

    // 3. resolvent residual at several grids
    for (s, n) in [(40.0, 1 << 15), (40.0, 1 << 16), (60.0, 1 << 17), (60.0, 1 << 18)] {
        let grid = LogGrid::new(s, n).unwrap();
        let r = spectra::resolvent(&k, &sp, &grid, c(5.0, 0.0), 2e-3).unwrap();
        let lk = transform::log_kernel(&k, &sp, &grid).unwrap();
        let conv = operator::apply_convolution(&lk, &r.values).unwrap();
        let mut worst = 0.0f64;
        for j in 0..grid.len {
            worst = worst.max((r.lambda * r.values[j] - conv[j] - lk.values[j]).norm());
        }
        // psi moment gap
        let psi = spectra::psi_kernel(&r, &sp);
        let m = psi.moment_absolute(&sp).unwrap();
        let rel = (m.value.re - r.l1_estimate).abs() / r.l1_estimate;
        println!(
            "S={s} N=2^{}: residual = {worst:.3e}, l1 = {:.8}, psi moment rel gap = {rel:.3e}",
            n.ilog2(),
            r.l1_estimate
        );
    }

    // 4. conjugation error scaling
    for (s, n) in [(20.0, 1 << 13), (20.0, 1 << 14), (20.0, 1 << 16)] {
        let grid = LogGrid::new(s, n).unwrap();
        let lk = transform::log_kernel(&k, &sp, &grid).unwrap();
        let g: Vec<Complex64> = (0..grid.len)
            .map(|j| c((-(grid.node(j) / 2.0).powi(2)).exp(), 0.0))
            .collect();
        let conv = operator::apply_convolution(&lk, &g).unwrap();
        let f = operator::FunctionHandle::from_fn(move |z: Complex64| {
            let t = z.re;
            if t <= 0.0 {
                return c(0.0, 0.0);
            }
            let sv = t.ln();
            c((-(sv / 2.0).powi(2)).exp(), 0.0) * t.powf(-0.5)
        });
        let t_nodes = grid.geometric_nodes();
        let direct = operator::apply_real(&k, &f, &t_nodes, &sp).unwrap();
        let lifted = transform::unitary(Direction::Forward, &direct, &sp, &grid).unwrap();
        let scale = conv.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let max_err = conv
            .iter()
            .zip(lifted.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!(
            "conjugation S={s} N=2^{}: max_err = {:.3e} (rel {:.3e})",
            n.ilog2(),
            max_err,
            max_err / scale
        );
    }

    // 5. curve distance refinement probe
    let curve = symbol::symbol_curve(&k, &sp, &symbol::xi_nodes(200.0, 32768), symbol::MethodHint::Auto).unwrap();
    let d3 = symbol::curve_distance(&curve, c(3.0, 0.0));
    println!("dist(3) = {:.12} at xi = {:.6}", d3.distance, d3.argmin_xi);
    let d_refined = symbol::min_symbol_distance_refined(&k, &sp, c(3.0, 0.0), &symbol::xi_nodes(200.0, 4096)).unwrap();
    println!("refined dist(3) = {:.12} at xi = {:.6}", d_refined.0, d_refined.1);

    // 6. steep endpoint quadrature
    let (v, e) = hsl::quad::integrate_real(|x| 1.0 / x.max(1e-300).sqrt(), 1e-12, 1.0, 1e-10, 1e-13);
    println!("int x^-1/2 = {v:.12} (err est {e:.3e}), target 1.999998");
}

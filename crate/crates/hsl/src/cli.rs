//! Command-line surface: configuration parsing and the subcommand
//! implementations behind the `hsl` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::approx_eigen::{self, TestFunctionParams};
use crate::cesaro::{self, CesaroTolerances};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::operator::{self, FunctionHandle, NormDomain};
use crate::report::{self, ResidualRow};
use crate::space::{SpaceKind, SpaceParams};
use crate::spectra;
use crate::symbol::{self, MethodHint};
use crate::transform::{self, LogGrid};

/// Parses "RE+IMi" style complex literals: "5", "-1", "3i", "2+0i",
/// "0.4-0.8i", "-i".
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.trim().replace(' ', "");
    let bad = || Error::Config(format!("cannot parse complex number from {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if !s.ends_with('i') {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    }
    let body = &s[..s.len() - 1];
    // split at the last +/- that is not an exponent sign and not leading
    let split = body
        .char_indices()
        .rev()
        .find(|&(i, ch)| {
            (ch == '+' || ch == '-')
                && i > 0
                && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i);
    let (re_part, im_part) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

#[derive(Parser, Debug)]
#[command(
    name = "hsl",
    version,
    about = "Hausdorff operators on weighted spaces: symbols, spectra, resolvents, norms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceChoice {
    Lebesgue,
    Hardy,
    Bergman,
}

impl SpaceChoice {
    fn kind(self) -> SpaceKind {
        match self {
            SpaceChoice::Lebesgue => SpaceKind::LebesgueLine,
            SpaceChoice::Hardy => SpaceKind::HardyBoundary,
            SpaceChoice::Bergman => SpaceKind::BergmanPlane,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Closed,
    Quadrature,
    Fft,
}

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    /// Kernel description JSON file.
    #[arg(long, value_name = "FILE", conflicts_with = "cesaro")]
    pub kernel: Option<PathBuf>,
    /// Cesaro kernel of the given complex order (RE+IMi).
    #[arg(long, value_name = "NU")]
    pub cesaro: Option<String>,
}

impl KernelArgs {
    pub fn resolve(&self) -> Result<Kernel> {
        match (&self.kernel, &self.cesaro) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)?;
                Kernel::from_json(&text)
            }
            (None, Some(nu)) => Kernel::cesaro(parse_complex(nu)?),
            _ => Err(Error::Config(
                "provide exactly one of --kernel FILE or --cesaro NU".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArgs {
    /// Integrability exponent p.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Weight power a.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, value_enum, default_value_t = SpaceChoice::Lebesgue)]
    pub space: SpaceChoice,
}

impl SpaceArgs {
    pub fn resolve(&self) -> Result<SpaceParams> {
        SpaceParams::new(self.p, self.a, self.space.kind())
    }
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Log-grid half-width S.
    #[arg(long = "S", default_value_t = 20.0)]
    pub half_width: f64,
    /// Log-grid sample count N (a power of two).
    #[arg(long = "N", default_value_t = 16384)]
    pub samples: usize,
}

impl GridArgs {
    pub fn resolve(&self) -> Result<LogGrid> {
        LogGrid::new(self.half_width, self.samples)
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output directory for artifacts.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write an SVG portrait where applicable.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample the spectral symbol curve and write it as CSV.
    Symbol {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 200.0)]
        xi_max: f64,
        #[arg(long, default_value_t = 4096)]
        xi_count: usize,
        #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
        method: MethodChoice,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the discretized spectrum against the symbol curve.
    Spectrum {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-sided operator norm bounds.
    Norm {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Construct the Wiener resolvent kernel at lambda and report its
    /// residual.
    Resolvent {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Resolvent point (complex, RE+IMi).
        #[arg(long)]
        lambda: String,
        /// Minimum allowed distance to the curve; default 1e-3 * sup|symbol|.
        #[arg(long)]
        margin: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Approximate-eigenfunction residual table.
    Residuals {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,3", allow_negative_numbers = true)]
        xi: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the closed-form Cesaro circle.
    Cesaro {
        /// Cesaro order (complex, RE+IMi).
        #[arg(long)]
        nu: String,
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Tolerance for the eigenvalue-versus-circle check.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        xi_count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply the operator to a named test function on a real grid.
    Apply {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        space: SpaceArgs,
        /// Input function: indicator | gauss | eigen:EPS:XI
        #[arg(long, default_value = "indicator")]
        f: String,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0)]
        x_max: f64,
        #[arg(long, default_value_t = 201)]
        x_count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn init_threads() {
    if let Ok(text) = std::env::var("HSL_THREADS") {
        if let Ok(n) = text.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn named_function(spec: &str, sp: &SpaceParams) -> Result<FunctionHandle> {
    if spec == "indicator" {
        return Ok(FunctionHandle::indicator(0.0, 1.0));
    }
    if spec == "gauss" {
        return Ok(FunctionHandle::gaussian(0.0, 1.0));
    }
    if let Some(rest) = spec.strip_prefix("eigen:") {
        let mut parts = rest.split(':');
        let eps: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config(format!("bad eigen spec {spec:?}")))?;
        let xi: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Config(format!("bad eigen spec {spec:?}")))?;
        let params = TestFunctionParams::new(eps, xi, *sp)?;
        return Ok(approx_eigen::test_function(&params));
    }
    Err(Error::Config(format!(
        "unknown function {spec:?}; expected indicator | gauss | eigen:EPS:XI"
    )))
}

/// Runs a parsed command line; returns the process exit code
/// (0 pass, 2 verification failure, 1 error).
pub fn run(cli: Cli) -> i32 {
    init_threads();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Symbol {
            kernel,
            space,
            xi_max,
            xi_count,
            method,
            grid,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let nodes = symbol::xi_nodes(xi_max, xi_count);
            let hint = match method {
                MethodChoice::Auto => MethodHint::Auto,
                MethodChoice::Closed => MethodHint::ClosedForm,
                MethodChoice::Quadrature => MethodHint::Quadrature,
                MethodChoice::Fft => MethodHint::Fft(grid.resolve()?),
            };
            let curve = match hint {
                MethodHint::Fft(g) => {
                    symbol::symbol_curve(&k, &sp, &g.dft_frequencies(), MethodHint::Fft(g))?
                }
                other => symbol::symbol_curve(&k, &sp, &nodes, other)?,
            };
            let path = output.out.join("symbol.csv");
            report::write_text(&path, &report::curve_csv(&curve))?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Spectrum {
            kernel,
            space,
            grid,
            tol,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let g = grid.resolve()?;
            let rep = spectra::spectral_verify(&k, &sp, &g, tol)?;
            let curve_path = output.out.join("spectrum_curve.csv");
            report::write_text(&curve_path, &report::curve_csv(&rep.curve))?;
            let json = report::spectral_report_json(&rep, "spectrum_curve.csv");
            report::write_json(&output.out.join("spectrum.json"), &json)?;
            if output.svg {
                let svg = report::spectrum_svg(&rep.curve, &rep.eigenvalues);
                report::write_text(&output.out.join("spectrum.svg"), &svg)?;
            }
            println!(
                "{}: hausdorff distance {:.3e} (tol {:.1e}), norm in [{:.6}, {:.6}]",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.hausdorff_distance,
                rep.tolerance,
                rep.lower_norm_bound,
                rep.upper_norm_bound
            );
            Ok(if rep.pass { 0 } else { 2 })
        }
        Command::Norm {
            kernel,
            space,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let bounds = approx_eigen::norm_bounds(&k, &sp)?;
            let json = serde_json::to_value(bounds).unwrap();
            report::write_json(&output.out.join("norm.json"), &json)?;
            println!(
                "norm bounds: [{:.12}, {:.12}]",
                bounds.lower, bounds.upper
            );
            Ok(0)
        }
        Command::Resolvent {
            kernel,
            space,
            grid,
            lambda,
            margin,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let g = grid.resolve()?;
            let lambda = parse_complex(&lambda)?;
            let margin = match margin {
                Some(m) => m,
                None => {
                    let (sup, _) =
                        symbol::sup_modulus_refined(&k, &sp, &symbol::default_xi_nodes())?;
                    spectra::default_margin(sup)
                }
            };
            let r = spectra::resolvent(&k, &sp, &g, lambda, margin)?;
            let lk = transform::log_kernel(&k, &sp, &g)?;
            let conv = operator::apply_convolution(&lk, &r.values)?;
            let mut max_residual = 0.0f64;
            for j in 0..g.len {
                let res = lambda * r.values[j] - conv[j] - lk.values[j];
                max_residual = max_residual.max(res.norm());
            }
            let json = serde_json::json!({
                "lambda": [lambda.re, lambda.im],
                "margin": margin,
                "l1_estimate": r.l1_estimate,
                "max_time_domain_residual": max_residual,
            });
            report::write_json(&output.out.join("resolvent.json"), &json)?;
            println!(
                "resolvent at {lambda}: L1 estimate {:.6}, residual {:.3e}",
                r.l1_estimate, max_residual
            );
            Ok(0)
        }
        Command::Residuals {
            kernel,
            space,
            eps,
            xi,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let domain = NormDomain::default();
            let mut rows = Vec::new();
            for &x in &xi {
                for &e in &eps {
                    let params = TestFunctionParams::new(e, x, sp)?;
                    let residual = approx_eigen::eigen_residual(&k, &params, &domain)?;
                    let f = approx_eigen::test_function(&params);
                    let norm = operator::norm(&f, &sp, &domain)?.value;
                    rows.push(ResidualRow {
                        epsilon: e,
                        xi: x,
                        residual,
                        norm,
                    });
                }
            }
            let path = output.out.join("residuals.csv");
            report::write_text(&path, &report::residual_csv(&rows))?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Cesaro {
            nu,
            space,
            grid,
            tol,
            xi_count,
            output,
        } => {
            let order = parse_complex(&nu)?;
            let sp = space.resolve()?;
            let g = grid.resolve()?;
            let nodes = symbol::xi_nodes(50.0, xi_count.max(2));
            let tols = CesaroTolerances {
                eigenvalue: tol,
                ..Default::default()
            };
            let rep = cesaro::verify_cesaro(order, &sp, &g, &nodes, &tols)?;
            report::write_json(&output.out.join("cesaro.json"), &report::cesaro_report_json(&rep))?;
            println!(
                "{}: center {:.6}, radius {:.6}, norm {:.6}; eigenvalue deviation {:.3e}",
                if rep.pass { "PASS" } else { "FAIL" },
                rep.center,
                rep.radius,
                rep.norm,
                rep.eigenvalue_deviation
            );
            Ok(if rep.pass { 0 } else { 2 })
        }
        Command::Apply {
            kernel,
            space,
            f,
            x_min,
            x_max,
            x_count,
            output,
        } => {
            let k = kernel.resolve()?;
            let sp = space.resolve()?;
            let handle = named_function(&f, &sp)?;
            if !(x_count >= 2 && x_max > x_min) {
                return Err(Error::Config("need x_count >= 2 and x_max > x_min".into()));
            }
            let step = (x_max - x_min) / (x_count - 1) as f64;
            let xs: Vec<f64> = (0..x_count).map(|i| x_min + i as f64 * step).collect();
            let values = operator::apply_real(&k, &handle, &xs, &sp)?;
            let path = output.out.join("apply.csv");
            report::write_text(&path, &report::samples_csv(&xs, &values))?;
            println!("wrote {}", path.display());
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("5").unwrap(), Complex64::new(5.0, 0.0));
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("2+0i").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(
            parse_complex("0.4-0.8i").unwrap(),
            Complex64::new(0.4, -0.8)
        );
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(
            parse_complex("1e-3+2e4i").unwrap(),
            Complex64::new(1e-3, 2e4)
        );
        assert_eq!(parse_complex(" 2 + i ").unwrap(), Complex64::new(2.0, 1.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn cli_parses_spectrum_invocation() {
        let cli = Cli::try_parse_from([
            "hsl", "spectrum", "--cesaro", "1+0i", "--p", "2", "--a", "0", "--S", "20", "--N",
            "16384", "--tol", "1e-4", "--out", "/tmp/x", "--svg",
        ])
        .unwrap();
        match cli.command {
            Command::Spectrum { grid, output, .. } => {
                assert_eq!(grid.half_width, 20.0);
                assert_eq!(grid.samples, 16384);
                assert!(output.svg);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}

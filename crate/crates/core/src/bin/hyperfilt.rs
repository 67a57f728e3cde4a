use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use hyperfilt::checks::{run_checks, Suite};
use hyperfilt::filtration::{
    filtrate, filtrate_direct, filtrate_spectral, gegenbauer_kernel, project_component, zonal_convolve, FilterConfig,
    ZonalProfile,
};
use hyperfilt::io::{fmt_f64, read_manifest, read_values, write_manifest, write_values};
use hyperfilt::polynomials::{
    dim_harmonics, eval_gegenbauer, eval_gegenbauer_integral, GegenbauerParams, LegendreMethod, LegendreParams,
};
use hyperfilt::quadrature::{l2_norm, sphere_grid, SampledFunction};
use hyperfilt::{surface_area, AmbientDim, Error, Result};

#[derive(Parser)]
#[command(name = "hyperfilt", version, about = "Harmonic analysis and Gegenbauer filtration on the hypersphere")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyKind {
    Legendre,
    Gegenbauer,
}

#[derive(Subcommand)]
enum Command {
    /// Harmonic dimensions D(l, N) for l = 0..=lmax.
    Dims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lmax: usize,
    },
    /// Evaluate P_{l,N} or C_l^alpha at a list of points.
    Eval {
        kind: PolyKind,
        #[arg(long)]
        l: usize,
        /// Ambient dimension (Legendre).
        #[arg(long)]
        n: Option<usize>,
        /// Gegenbauer index.
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated evaluation points in [-1, 1].
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        t: Vec<f64>,
        #[arg(long, default_value = "recurrence")]
        method: String,
        /// One column per evaluation route plus their largest pairwise deviation.
        #[arg(long)]
        all_methods: bool,
    },
    /// Build a quadrature grid and write its manifest.
    Quad {
        #[arg(long)]
        n: usize,
        /// Base order m; the grid is exact to degree 2m - 1.
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate G_N(r, t) on an equispaced t-grid.
    KernelTable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        /// Number of t intervals on [-1, 1].
        #[arg(long, default_value_t = 20)]
        order: usize,
    },
    /// Sample the zonal polynomial P_{l,N}(xi . e_N) on a grid.
    Sample {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Degree-l harmonic component of sampled values.
    Project {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply the Gegenbauer filtration operator.
    Filter {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        values: PathBuf,
        #[arg(long)]
        r: f64,
        /// Spectral truncation degree; without it the direct path is used.
        #[arg(long)]
        lmax: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also report the direct-vs-spectral deviation.
        #[arg(long)]
        verify: bool,
    },
    /// Convolve sampled values with a zonal profile.
    Convolve {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        values: PathBuf,
        /// Use the normalized filtration kernel with this r.
        #[arg(long, conflicts_with = "l", required_unless_present = "l")]
        r: Option<f64>,
        /// Use the Legendre profile P_{l,N}.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suite.
    Check {
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if lock.write_all(out.as_bytes()).and_then(|_| lock.flush()).is_err() {
        return ExitCode::from(3);
    }
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dim(n: usize) -> Result<AmbientDim> {
    AmbientDim::new(n)
}

fn load(grid: &Path, values: &Path) -> Result<SampledFunction> {
    let g = Arc::new(read_manifest(grid)?);
    read_values(values, g)
}

fn run(cmd: Command, out: &mut String) -> Result<u8> {
    use std::fmt::Write as _;
    match cmd {
        Command::Dims { n, lmax } => {
            let n = dim(n)?;
            writeln!(out, "l,dim").unwrap();
            for l in 0..=lmax {
                writeln!(out, "{l},{}", dim_harmonics(l, n)?).unwrap();
            }
        }
        Command::Eval { kind, l, n, alpha, t, method, all_methods } => {
            for &x in &t {
                if !(-1.0..=1.0).contains(&x) {
                    return Err(Error::Domain(format!("t = {x} outside [-1, 1]")));
                }
            }
            match kind {
                PolyKind::Legendre => {
                    let n = n.ok_or_else(|| Error::Domain("legendre needs --n".into()))?;
                    let p = LegendreParams::new(l, n)?;
                    if all_methods {
                        let names: Vec<&str> = LegendreMethod::ALL.iter().map(|m| m.name()).collect();
                        writeln!(out, "t,{},max_dev", names.join(",")).unwrap();
                        for &x in &t {
                            let vals: Vec<Option<f64>> =
                                LegendreMethod::ALL.iter().map(|m| m.evaluate(p, x).ok()).collect();
                            let defined: Vec<f64> = vals.iter().flatten().copied().collect();
                            let dev = defined
                                .iter()
                                .flat_map(|a| defined.iter().map(move |b| (a - b).abs()))
                                .fold(0.0, f64::max);
                            let cols: Vec<String> =
                                vals.iter().map(|v| v.map_or_else(|| "nan".to_string(), fmt_f64)).collect();
                            writeln!(out, "{},{},{}", fmt_f64(x), cols.join(","), fmt_f64(dev)).unwrap();
                        }
                    } else {
                        let m: LegendreMethod = method.parse()?;
                        writeln!(out, "t,value").unwrap();
                        for &x in &t {
                            writeln!(out, "{},{}", fmt_f64(x), fmt_f64(m.evaluate(p, x)?)).unwrap();
                        }
                    }
                }
                PolyKind::Gegenbauer => {
                    let alpha = match (alpha, n) {
                        (Some(a), _) => a,
                        (None, Some(n)) => (n as f64 - 2.0) / 2.0,
                        (None, None) => return Err(Error::Domain("gegenbauer needs --alpha or --n".into())),
                    };
                    let g = GegenbauerParams::new(l, alpha)?;
                    if all_methods {
                        writeln!(out, "t,recurrence,integral,max_dev").unwrap();
                        for &x in &t {
                            let a = eval_gegenbauer(g, x)?;
                            let b = eval_gegenbauer_integral(g, x)?;
                            writeln!(out, "{},{},{},{}", fmt_f64(x), fmt_f64(a), fmt_f64(b), fmt_f64((a - b).abs()))
                                .unwrap();
                        }
                    } else {
                        writeln!(out, "t,value").unwrap();
                        for &x in &t {
                            let v = match method.as_str() {
                                "integral" => eval_gegenbauer_integral(g, x)?,
                                "recurrence" => eval_gegenbauer(g, x)?,
                                other => {
                                    return Err(Error::Domain(format!(
                                        "gegenbauer supports methods recurrence and integral, not '{other}'"
                                    )))
                                }
                            };
                            writeln!(out, "{},{}", fmt_f64(x), fmt_f64(v)).unwrap();
                        }
                    }
                }
            }
        }
        Command::Quad { n, order, out: path } => {
            let n = dim(n)?;
            let grid = sphere_grid(n, order)?;
            write_manifest(&grid, &path)?;
            let total = grid.total_weight();
            let area = surface_area(n);
            writeln!(out, "points,weight_sum,surface_area,relative_deviation").unwrap();
            writeln!(
                out,
                "{},{},{},{}",
                grid.len(),
                fmt_f64(total),
                fmt_f64(area),
                fmt_f64((total - area).abs() / area)
            )
            .unwrap();
        }
        Command::KernelTable { n, r, order } => {
            let n = dim(n)?;
            if order == 0 {
                return Err(Error::Domain("--order must be at least 1".into()));
            }
            writeln!(out, "t,kernel").unwrap();
            for i in 0..=order {
                let t = if i == order { 1.0 } else { -1.0 + 2.0 * i as f64 / order as f64 };
                writeln!(out, "{},{}", fmt_f64(t), fmt_f64(gegenbauer_kernel(n, r, t)?)).unwrap();
            }
        }
        Command::Sample { grid, l, out: path } => {
            let g = Arc::new(read_manifest(&grid)?);
            let f = ZonalProfile::legendre(g.dim(), l).sample(g)?;
            write_values(&f, &path)?;
            writeln!(out, "points,l2_norm").unwrap();
            writeln!(out, "{},{}", f.len(), fmt_f64(l2_norm(&f))).unwrap();
        }
        Command::Project { grid, values, l, out: path } => {
            let f = load(&grid, &values)?;
            let p = project_component(&f, l)?;
            write_values(&p, &path)?;
            writeln!(out, "input_l2,component_l2").unwrap();
            writeln!(out, "{},{}", fmt_f64(l2_norm(&f)), fmt_f64(l2_norm(&p))).unwrap();
        }
        Command::Filter { grid, values, r, lmax, out: path, verify } => {
            let f = load(&grid, &values)?;
            let cfg = FilterConfig::new(r, lmax, f.grid().dim())?;
            let g = filtrate(&f, &cfg)?;
            write_values(&g, &path)?;
            if verify {
                let spectral = filtrate_spectral(&f, r, lmax.unwrap_or_else(|| f.effective_band()))?;
                let direct = filtrate_direct(&f, r)?;
                writeln!(out, "input_l2,output_l2,direct_vs_spectral").unwrap();
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(l2_norm(&f)),
                    fmt_f64(l2_norm(&g)),
                    fmt_f64(direct.max_abs_diff(&spectral)?)
                )
                .unwrap();
            } else {
                writeln!(out, "input_l2,output_l2").unwrap();
                writeln!(out, "{},{}", fmt_f64(l2_norm(&f)), fmt_f64(l2_norm(&g))).unwrap();
            }
        }
        Command::Convolve { grid, values, r, l, out: path } => {
            let f = load(&grid, &values)?;
            let n = f.grid().dim();
            let h = match (r, l) {
                (Some(r), _) => ZonalProfile::gegenbauer(n, r)?,
                (None, Some(l)) => ZonalProfile::legendre(n, l),
                (None, None) => unreachable!("clap requires one profile"),
            };
            let g = zonal_convolve(&f, &h)?;
            write_values(&g, &path)?;
            writeln!(out, "input_l2,output_l2").unwrap();
            writeln!(out, "{},{}", fmt_f64(l2_norm(&f)), fmt_f64(l2_norm(&g))).unwrap();
        }
        Command::Check { suite } => {
            let suite: Suite = suite.parse()?;
            let report = run_checks(suite);
            out.push_str(&report.render());
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

//! Experiment harness for the pscomp library: parses matrix sources and
//! configs, dispatches subcommands, and emits CSV/JSON/SVG artifacts whose
//! headers echo the full configuration (rerunning a header reproduces the
//! artifact byte-for-byte).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use output::{fmt_f64, parse_config_file, polygon_svg, write_csv, write_json, ConfigEcho};
use pscomp::matrix::{self, CMatrix};
use pscomp::numerical_measure as nm;
use pscomp::pseudospectrum as ps;
use pscomp::tail_bounds as tb;
use pscomp::{numrange, verify, RngStream};

#[derive(Parser)]
#[command(
    name = "pscomp",
    version,
    about = "Numerical experiments on pseudospectra of Haar-random compressions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Densities: the exact law of q*Hq for Hermitian spectra, or the planar
    /// density of q*Mq on a grid.
    Density(DensityArgs),
    /// Small-ball probabilities of q*Mq with the theoretical bound.
    Smallball(SmallballArgs),
    /// Tail of the least singular value of shifted compressions.
    Tail(TailArgs),
    /// Numerical range boundary, polygon estimates, optional SVG.
    Numrange(NumrangeArgs),
    /// Expected pseudospectral area against the theorem bounds.
    Psarea(PsareaArgs),
    /// Run verification suites and emit a JSON verdict report.
    Verify(VerifyArgs),
    /// Re-run the configuration embedded in an emitted artifact header.
    Rerun(RerunArgs),
}

#[derive(Args)]
struct CommonOut {
    /// Output directory for artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct DensityArgs {
    /// Comma-separated real eigenvalues: emit the 1-D density of q*Hq.
    #[arg(long, conflicts_with = "matrix")]
    hermitian: Option<String>,
    /// Matrix source (file or generator): emit the planar density on a grid.
    #[arg(long)]
    matrix: Option<String>,
    /// Grid spec x0,x1,y0,y1,nx,ny for the planar density.
    #[arg(long)]
    grid: Option<String>,
    /// Angular quadrature size.
    #[arg(long, default_value_t = 512)]
    ktheta: usize,
    /// Sample count for the 1-D density.
    #[arg(long, default_value_t = 400)]
    points: usize,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct SmallballArgs {
    #[arg(long)]
    matrix: String,
    /// Comma-separated radii.
    #[arg(long)]
    eps: String,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Ball center "re,im".
    #[arg(long, default_value = "0,0")]
    z0: String,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct TailArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    ell: usize,
    /// Shift "re,im".
    #[arg(long, default_value = "0,0")]
    z: String,
    #[arg(long)]
    eps: String,
    #[arg(long, default_value_t = 2_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct NumrangeArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value_t = 256)]
    angles: usize,
    /// Also write an SVG rendering of the outer/inner polygons.
    #[arg(long, default_value_t = false)]
    svg: bool,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct PsareaArgs {
    #[arg(long)]
    matrix: String,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    eps: String,
    /// Number of Haar frames.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Initial classification grid.
    #[arg(long, default_value_t = 64)]
    resolution: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Regime assumption flags, e.g. "a,c".
    #[arg(long)]
    flags: Option<String>,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (a17, a22, ..., a2; aliases haar, net, reduction, area49,
    /// inradius52, corner53) or "all"; comma-separated lists accepted.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    common: CommonOut,
}

#[derive(Args)]
struct RerunArgs {
    /// An emitted artifact (its `# key=value` header) or a bare config file.
    config: PathBuf,
    /// Output directory override (defaults to the config's directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Ok(workers) = std::env::var("WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            pscomp::set_worker_threads(n);
        }
    }
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Density(args) => run_density(&args).map(|_| ExitCode::SUCCESS),
        Command::Smallball(args) => run_smallball(&args).map(|_| ExitCode::SUCCESS),
        Command::Tail(args) => run_tail(&args).map(|_| ExitCode::SUCCESS),
        Command::Numrange(args) => run_numrange(&args).map(|_| ExitCode::SUCCESS),
        Command::Psarea(args) => run_psarea(&args).map(|_| ExitCode::SUCCESS),
        Command::Verify(args) => run_verify(&args),
        Command::Rerun(args) => run_rerun(&args),
    }
}

fn parse_complex_pair(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        bail!("expected `re,im`, got `{s}`");
    }
    Ok(Complex64::new(parts[0].trim().parse()?, parts[1].trim().parse()?))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("bad number `{t}`: {e}")))
        .collect()
}

fn load_matrix(source: &str) -> Result<CMatrix> {
    matrix::parse_matrix_source(source).map_err(|e| anyhow!("matrix source `{source}`: {e}"))
}

// ---------------------------------------------------------------------------

fn run_density(args: &DensityArgs) -> Result<()> {
    match (&args.hermitian, &args.matrix) {
        (Some(eigs_str), None) => {
            let mut eigs: Vec<f64> = parse_f64_list(eigs_str)?;
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut echo = ConfigEcho::new("density");
            echo.push(
                "hermitian",
                eigs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
            );
            echo.push("points", args.points);
            let dens = pscomp::bspline::hermitian_form_density(&eigs)?;
            let span = (eigs[eigs.len() - 1] - eigs[0]).max(1e-9);
            let lo = eigs[0] - 0.05 * span;
            let hi = eigs[eigs.len() - 1] + 0.05 * span;
            let rows: Vec<Vec<String>> = (0..args.points)
                .map(|i| {
                    let t = lo + (hi - lo) * i as f64 / (args.points - 1).max(1) as f64;
                    let rho = dens.pdf(t).unwrap_or(f64::INFINITY);
                    vec![fmt_f64(t), fmt_f64(rho)]
                })
                .collect();
            let path = write_csv(&args.common.out, "density", &echo, &["t", "rho"], &rows)?;
            println!("wrote {}", path.display());
        }
        (None, Some(source)) => {
            let grid =
                args.grid.as_ref().context("planar density needs --grid x0,x1,y0,y1,nx,ny")?;
            let parts = parse_f64_list(grid)?;
            if parts.len() != 6 {
                bail!("grid spec needs 6 numbers, got {}", parts.len());
            }
            let (x0, x1, y0, y1) = (parts[0], parts[1], parts[2], parts[3]);
            let (nx, ny) = (parts[4] as usize, parts[5] as usize);
            let m = load_matrix(source)?;
            let mut echo = ConfigEcho::new("density");
            echo.push("matrix", source);
            echo.push("grid", grid);
            echo.push("ktheta", args.ktheta);
            let ev = nm::DensityEvaluator::new(&m, args.ktheta)?;
            let mut rows = Vec::with_capacity(nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    let z = Complex64::new(
                        x0 + (x1 - x0) * (i as f64 + 0.5) / nx as f64,
                        y0 + (y1 - y0) * (j as f64 + 0.5) / ny as f64,
                    );
                    let d = ev.density(z);
                    rows.push(vec![fmt_f64(z.re), fmt_f64(z.im), fmt_f64(d.value), fmt_f64(d.gap)]);
                }
            }
            let path =
                write_csv(&args.common.out, "density", &echo, &["re", "im", "rho", "gap"], &rows)?;
            println!("wrote {}", path.display());
        }
        _ => bail!("density needs exactly one of --hermitian or --matrix"),
    }
    Ok(())
}

fn run_smallball(args: &SmallballArgs) -> Result<()> {
    let m = load_matrix(&args.matrix)?;
    let eps_list = parse_f64_list(&args.eps)?;
    let z0 = parse_complex_pair(&args.z0)?;
    let mut echo = ConfigEcho::new("smallball");
    echo.push("matrix", &args.matrix);
    echo.push("eps", &args.eps);
    echo.push("samples", args.samples);
    echo.push("seed", args.seed);
    echo.push("z0", &args.z0);
    let stream = RngStream::new(args.seed, 0);
    let mut rows = Vec::new();
    for (i, &eps) in eps_list.iter().enumerate() {
        let est = nm::small_ball_empirical(&m, eps, z0, args.samples, &stream.substream(i as u64))?;
        let bound = match nm::small_ball_bound(&m, eps) {
            Ok(b) => b,
            Err(pscomp::Error::InvalidArgument(_)) => f64::INFINITY,
            Err(e) => return Err(e.into()),
        };
        let holds = est.ci_upper <= bound;
        rows.push(vec![
            fmt_f64(eps),
            fmt_f64(est.p_hat),
            fmt_f64(est.ci_upper),
            fmt_f64(bound),
            holds.to_string(),
        ]);
    }
    let path = write_csv(
        &args.common.out,
        "smallball",
        &echo,
        &["eps", "p_hat", "ci_upper", "bound", "holds"],
        &rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_tail(args: &TailArgs) -> Result<()> {
    let m = load_matrix(&args.matrix)?;
    let z = parse_complex_pair(&args.z)?;
    let eps_list = parse_f64_list(&args.eps)?;
    let mut echo = ConfigEcho::new("tail");
    echo.push("matrix", &args.matrix);
    echo.push("ell", args.ell);
    echo.push("z", &args.z);
    echo.push("eps", &args.eps);
    echo.push("samples", args.samples);
    echo.push("seed", args.seed);
    let stream = RngStream::new(args.seed, 0);
    let curve = tb::smin_tail_empirical(&m, args.ell, z, &eps_list, args.samples, &stream)?;
    let rows: Vec<Vec<String>> = (0..eps_list.len())
        .map(|i| {
            vec![
                fmt_f64(curve.eps_grid[i]),
                fmt_f64(curve.p_hat[i]),
                fmt_f64(curve.ci_upper[i]),
                fmt_f64(curve.bound_first[i]),
                fmt_f64(curve.bound_second.as_ref().map_or(f64::INFINITY, |b| b[i])),
            ]
        })
        .collect();
    let path = write_csv(
        &args.common.out,
        "tail",
        &echo,
        &["eps", "p_hat", "ci_upper", "bound_first", "bound_second"],
        &rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_numrange(args: &NumrangeArgs) -> Result<()> {
    let m = load_matrix(&args.matrix)?;
    let mut echo = ConfigEcho::new("numrange");
    echo.push("matrix", &args.matrix);
    echo.push("angles", args.angles);
    echo.push("svg", args.svg);
    let region = numrange::numerical_range(&m, args.angles)?;
    let rows: Vec<Vec<String>> = region
        .angles()
        .iter()
        .zip(region.support_values())
        .zip(region.touch_points())
        .map(|((theta, h), touch)| {
            vec![fmt_f64(*theta), fmt_f64(*h), fmt_f64(touch.0), fmt_f64(touch.1)]
        })
        .collect();
    let path = write_csv(
        &args.common.out,
        "numrange",
        &echo,
        &["theta", "h", "touch_re", "touch_im"],
        &rows,
    )?;
    println!("wrote {}", path.display());
    let (alo, ahi) = region.area_interval();
    let rad = region.inner_radius();
    println!("area [{}, {}], inner radius [{}, {}]", alo, ahi, rad.lo, rad.hi);
    if args.svg {
        let svg =
            polygon_svg(&[(region.outer_polygon(), "black"), (region.inner_polygon(), "red")]);
        std::fs::create_dir_all(&args.common.out)?;
        let svg_path = args.common.out.join("numrange.svg");
        std::fs::write(&svg_path, svg)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn run_psarea(args: &PsareaArgs) -> Result<()> {
    let a = load_matrix(&args.matrix)?;
    let n = a.nrows();
    let eps_list = parse_f64_list(&args.eps)?;
    let mut echo = ConfigEcho::new("psarea");
    echo.push("matrix", &args.matrix);
    echo.push("ell", args.ell);
    echo.push("eps", &args.eps);
    echo.push("samples", args.samples);
    echo.push("resolution", args.resolution);
    echo.push("seed", args.seed);
    if let Some(f) = &args.flags {
        echo.push("flags", f);
    }
    let stream = RngStream::new(args.seed, 0);
    let consts = tb::BoundConstants::traced(n, args.ell);
    let region = numrange::numerical_range(&a, 256)?;
    let bounds_applicable = 2.0 * args.ell as f64 <= n as f64 - 15.0;
    let (sm_l, sm_l8) = if bounds_applicable {
        let tol = 0.02 * matrix::operator_norm(&a);
        (
            Some(ps::shifted_min(&a, args.ell, Some(&region), tol, 150_000)?),
            Some(ps::shifted_min(&a, args.ell + 8, Some(&region), tol, 150_000)?),
        )
    } else {
        (None, None)
    };

    let flags = match args.flags.as_deref() {
        None => ps::RegimeFlags::default(),
        Some(s) => {
            let mut f = ps::RegimeFlags::default();
            for tok in s.split(',') {
                match tok.trim() {
                    "a" => f.a = true,
                    "b" => f.b = true,
                    "c" => f.c = true,
                    other => bail!("unknown flag `{other}` (expected a, b, c)"),
                }
            }
            f
        }
    };

    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for (i, &eps) in eps_list.iter().enumerate() {
        let opts =
            ps::AreaOptions { initial_nx: args.resolution, ..ps::AreaOptions::for_eps(eps) };
        let mc = ps::expected_area_mc(
            &a,
            args.ell,
            eps,
            args.samples,
            &opts,
            &stream.substream(i as u64),
        )?;
        let (bounds, beta) = if let (Some(sm_l), Some(sm_l8)) = (&sm_l, &sm_l8) {
            let omega = region.minkowski_eps(eps)?;
            let (dlo, dhi) = omega.diameter_interval();
            let rad = omega.inner_radius();
            let geometry = ps::Geometry {
                big_r: ps::GeomInterval::new(dlo, dhi),
                small_r: ps::GeomInterval::new(rad.lo, rad.hi),
                s_ell: ps::GeomInterval::new((sm_l.s_k - sm_l.certificate_gap).max(0.0), sm_l.s_k),
                s_ell8: ps::GeomInterval::new(
                    (sm_l8.s_k - sm_l8.certificate_gap).max(0.0),
                    sm_l8.s_k,
                ),
            };
            let bounds = ps::theorem_bounds(n, args.ell, eps, &consts, &geometry)?;
            let beta = ps::regime_exponent(flags, &geometry, n, args.ell).unwrap_or(None);
            (Some(bounds), beta)
        } else {
            (None, None)
        };
        let min_bound = bounds.as_ref().and_then(|b| b.applicable_minimum());
        let holds = min_bound.map(|b| mc.mean_hi + mc.ci_halfwidth <= b);
        let items = bounds.as_ref().map(|b| b.items).unwrap_or([f64::INFINITY; 5]);
        let lemma54 = bounds.as_ref().map_or(f64::INFINITY, |b| b.lemma54);
        rows.push(vec![
            fmt_f64(eps),
            fmt_f64(mc.mean_lo),
            fmt_f64(mc.mean_hi),
            fmt_f64(mc.ci_halfwidth),
            fmt_f64(items[0]),
            fmt_f64(items[1]),
            fmt_f64(items[2]),
            fmt_f64(items[3]),
            fmt_f64(items[4]),
            fmt_f64(lemma54),
            beta.map_or(String::new(), |r| r.beta.to_string()),
        ]);
        verdicts.push(serde_json::json!({
            "eps": eps,
            "mean_lo": mc.mean_lo,
            "mean_hi": mc.mean_hi,
            "ci": mc.ci_halfwidth,
            "min_applicable_bound": min_bound,
            "dominance_holds": holds,
            "beta": beta.map(|r| r.beta),
            "realizing_item": beta.map(|r| r.item),
        }));
    }
    let path = write_csv(
        &args.common.out,
        "psarea",
        &echo,
        &[
            "eps", "mean_lo", "mean_hi", "ci", "bound1", "bound2", "bound3", "bound4", "bound5",
            "lemma54", "beta",
        ],
        &rows,
    )?;
    println!("wrote {}", path.display());
    let summary = serde_json::json!({
        "config": echo.pairs().iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "results": verdicts,
    });
    let json_path = write_json(&args.common.out, "psarea", &summary)?;
    println!("wrote {}", json_path.display());
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let mut echo = ConfigEcho::new("verify");
    echo.push("suite", &args.suite);
    echo.push("seed", args.seed);
    let reports = if args.suite == "all" {
        verify::run_all(args.seed)?
    } else {
        let mut reports = Vec::new();
        for name in args.suite.split(',') {
            let canonical = verify::canonical_suite_name(name.trim())
                .ok_or_else(|| anyhow!("unknown suite `{name}`"))?;
            let idx = verify::SUITE_NAMES.iter().position(|n| *n == canonical).unwrap();
            reports.push(verify::run_suite(canonical, &RngStream::new(args.seed, idx as u64))?);
        }
        reports
    };
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        println!("{:>5}  {}  {}", r.name, if r.passed { "PASS" } else { "FAIL" }, r.label);
        for d in &r.details {
            println!("       {d}");
        }
    }
    let doc = serde_json::json!({
        "config": echo.pairs().iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "passed": passed,
        "suites": reports,
    });
    let path = write_json(&args.common.out, "verify", &doc)?;
    println!("wrote {}", path.display());
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn run_rerun(args: &RerunArgs) -> Result<ExitCode> {
    let pairs = parse_config_file(&args.config)?;
    let get =
        |key: &str| -> Option<String> { pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone()) };
    let sub = get("subcommand").context("config has no `subcommand` key")?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| args.config.parent().unwrap_or(std::path::Path::new(".")).to_path_buf());
    let common = CommonOut { out };
    let missing = |key: &str| anyhow!("config missing `{key}`");
    match sub.as_str() {
        "density" => run_density(&DensityArgs {
            hermitian: get("hermitian"),
            matrix: get("matrix"),
            grid: get("grid"),
            ktheta: get("ktheta").map_or(Ok(512), |v| v.parse())?,
            points: get("points").map_or(Ok(400), |v| v.parse())?,
            common,
        })
        .map(|_| ExitCode::SUCCESS),
        "smallball" => run_smallball(&SmallballArgs {
            matrix: get("matrix").ok_or_else(|| missing("matrix"))?,
            eps: get("eps").ok_or_else(|| missing("eps"))?,
            samples: get("samples").map_or(Ok(20_000), |v| v.parse())?,
            seed: get("seed").map_or(Ok(7), |v| v.parse())?,
            z0: get("z0").unwrap_or_else(|| "0,0".into()),
            common,
        })
        .map(|_| ExitCode::SUCCESS),
        "tail" => run_tail(&TailArgs {
            matrix: get("matrix").ok_or_else(|| missing("matrix"))?,
            ell: get("ell").ok_or_else(|| missing("ell"))?.parse()?,
            z: get("z").unwrap_or_else(|| "0,0".into()),
            eps: get("eps").ok_or_else(|| missing("eps"))?,
            samples: get("samples").map_or(Ok(2_000), |v| v.parse())?,
            seed: get("seed").map_or(Ok(7), |v| v.parse())?,
            common,
        })
        .map(|_| ExitCode::SUCCESS),
        "numrange" => run_numrange(&NumrangeArgs {
            matrix: get("matrix").ok_or_else(|| missing("matrix"))?,
            angles: get("angles").map_or(Ok(256), |v| v.parse())?,
            svg: get("svg").map_or(Ok(false), |v| v.parse())?,
            common,
        })
        .map(|_| ExitCode::SUCCESS),
        "psarea" => run_psarea(&PsareaArgs {
            matrix: get("matrix").ok_or_else(|| missing("matrix"))?,
            ell: get("ell").ok_or_else(|| missing("ell"))?.parse()?,
            eps: get("eps").ok_or_else(|| missing("eps"))?,
            samples: get("samples").map_or(Ok(50), |v| v.parse())?,
            resolution: get("resolution").map_or(Ok(64), |v| v.parse())?,
            seed: get("seed").map_or(Ok(7), |v| v.parse())?,
            flags: get("flags"),
            common,
        })
        .map(|_| ExitCode::SUCCESS),
        "verify" => run_verify(&VerifyArgs {
            suite: get("suite").unwrap_or_else(|| "all".into()),
            seed: get("seed").map_or(Ok(7), |v| v.parse())?,
            common,
        }),
        other => bail!("cannot rerun subcommand `{other}`"),
    }
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use g2sphere::charts::{best_chart, chart_contains};
use g2sphere::g2_algebra::{root_basis, RealBasis, ROOT_NAMES, REAL_NAMES};
use g2sphere::j_sphere::j_matrix;
use g2sphere::linalg::Vec7;
use g2sphere::octonion::automorphism_residual;
use g2sphere::orbit_analysis::{orbit_dims, random_complex_g2, random_real_g2};
use g2sphere::poly_engine::extract_matrix_elements;
use g2sphere::rng::Rng;
use g2sphere::samelson::{j_operator, Moduli};
use g2sphere::scalars::parse_expr;
use g2sphere::sphere_map::{f_matrix, identity_residuals, SpherePoint};
use g2sphere::verify::{self, VerifyConfig};
use g2sphere::{Error, QuadScalar, Scalar};

#[derive(Parser)]
#[command(name = "g2sphere", version, about = "Checks and tables for the G2 model of S6")]
struct Cli {
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 20)]
    samples: usize,
    /// Moduli (alpha, b); may be repeated. Values accept forms like 2/sqrt3.
    #[arg(long, global = true, num_args = 2, value_names = ["ALPHA", "B"], action = ArgAction::Append, allow_hyphen_values = true)]
    moduli: Vec<String>,
    /// Tolerance override NAME=VAL; may be repeated.
    #[arg(long, global = true, action = ArgAction::Append)]
    tol: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exact arithmetic in Q(sqrt2, sqrt3) where supported.
    #[arg(long, global = true)]
    exact: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Rescale non-unit points onto the sphere instead of rejecting them.
    #[arg(long, global = true)]
    normalize: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Run all verification suites.
    Verify,
    /// The 6x6 matrix of J at a point, in a chart frame.
    J {
        #[arg(long, num_args = 7, allow_hyphen_values = true, required = true)]
        point: Vec<String>,
        #[arg(long)]
        chart: Option<usize>,
    },
    /// The rotation f(x).
    F {
        #[arg(long, num_args = 7, allow_hyphen_values = true, required = true)]
        point: Vec<String>,
    },
    /// Root basis at (a, b) = (1/alpha, b) and the real basis.
    Basis,
    /// Symbolic matrix-element tables.
    Polys,
    /// Intersection dimensions for random group elements.
    OrbitDim {
        /// 0 samples real group elements; otherwise exp(Z) with |Z| = scale.
        #[arg(long, default_value_t = 0.0)]
        complex_scale: f64,
    },
}

/// Exit status plus the rendered output.
struct Outcome {
    ok: bool,
    value: Value,
    csv: String,
    pretty: String,
}

enum Failure {
    Config(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) | Error::Indeterminate { .. } => Failure::Check(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn parse_f64(s: &str) -> Res<f64> {
    s.trim()
        .parse::<f64>()
        .or_else(|_| parse_expr(s).map(|q| q.to_f64()))
        .map_err(|_| Failure::Config(format!("cannot parse number {s:?}")))
}

fn moduli_f64(cli: &Cli) -> Res<Vec<Moduli<f64>>> {
    cli.moduli
        .chunks(2)
        .map(|p| Ok(Moduli::new(parse_f64(&p[0])?, parse_f64(&p[1])?)?))
        .collect()
}

fn moduli_exact(cli: &Cli) -> Res<Vec<Moduli<QuadScalar>>> {
    cli.moduli
        .chunks(2)
        .map(|p| Ok(Moduli::new(parse_expr(&p[0])?, parse_expr(&p[1])?)?))
        .collect()
}

fn first_or_default<T: Clone>(v: Vec<T>, default: T) -> T {
    v.into_iter().next().unwrap_or(default)
}

fn point_f64(cli: &Cli, raw: &[String]) -> Res<SpherePoint<f64>> {
    let v = raw.iter().map(|s| parse_f64(s)).collect::<Res<Vec<f64>>>()?;
    let x = Vec7::from_iterator(v);
    let n = x.norm();
    if cli.normalize {
        return Ok(SpherePoint::normalized(x)?);
    }
    if (n - 1.0).abs() > 1e-9 {
        return Err(Failure::Config(format!("point has norm {n}, not 1 (use --normalize)")));
    }
    Ok(SpherePoint::new(x / n)?)
}

fn point_exact(raw: &[String]) -> Res<SpherePoint<QuadScalar>> {
    let v = raw.iter().map(|s| parse_expr(s)).collect::<Result<Vec<_>, _>>()?;
    Ok(SpherePoint::new(Vec7::from_iterator(v))?)
}

fn rows<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> Vec<Vec<f64>> {
    (0..R).map(|i| (0..C).map(|j| m[(i, j)]).collect()).collect()
}

fn pretty_matrix(title: &str, m: &[Vec<f64>]) -> String {
    let mut s = format!("{title}\n");
    for row in m {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>12.8}", if v.abs() < 5e-16 { 0.0 } else { *v })).collect();
        let _ = writeln!(s, "  {}", cells.join(" "));
    }
    s
}

fn csv_matrix(name: &str, m: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let _ = writeln!(s, "{name},{i},{j},{v:e}");
        }
    }
    s
}

fn cmd_verify(cli: &Cli) -> Res<Outcome> {
    let mut cfg = VerifyConfig::new(cli.seed, cli.samples, moduli_f64(cli)?)?;
    for t in &cli.tol {
        let (k, v) = t.split_once('=').ok_or_else(|| Failure::Config(format!("--tol expects NAME=VAL, got {t:?}")))?;
        cfg.set_tol(k.trim(), parse_f64(v)?)?;
    }
    let report = verify::run(&cfg)?;
    let mut csv = String::from("suite,check,anchor,max_residual,tol,pass\n");
    let mut pretty = String::new();
    for c in &report.checks {
        let _ = writeln!(csv, "{},{},{},{:e},{:e},{}", c.suite, c.name, c.anchor, c.max_residual, c.tol, c.pass);
        let _ = writeln!(
            pretty,
            "{} {:<11} {:<44} residual {:>10.3e} (tol {:.0e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.max_residual,
            c.tol
        );
    }
    let value = serde_json::to_value(&report).map_err(|e| Failure::Check(e.to_string()))?;
    Ok(Outcome { ok: report.pass, value, csv, pretty })
}

fn cmd_j(cli: &Cli, raw: &[String], chart: Option<usize>) -> Res<Outcome> {
    let y = point_f64(cli, raw)?;
    let chart = chart.unwrap_or_else(|| best_chart(&y));
    if !(1..=7).contains(&chart) {
        return Err(Failure::Config(format!("chart {chart} is not in 1..=7")));
    }
    if !chart_contains(chart, &y) {
        return Err(Failure::Config(format!("point is outside chart {chart}")));
    }
    let ms = moduli_f64(cli)?;
    let ms = if ms.is_empty() { vec![Moduli::new(1.0, 1.0)?] } else { ms };
    let mut entries = Vec::new();
    let mut csv = String::from("alpha,b,row,col,value\n");
    let mut pretty = String::new();
    for m in &ms {
        let sj = j_matrix(&j_operator(m)?, chart, &y)?;
        let mat = rows(&sj.matrix);
        entries.push(json!({
            "moduli": {"alpha": m.alpha, "b": m.b},
            "matrix": mat,
            "square_defect": sj.square_defect(),
            "orthogonality_defect": sj.orthogonality_defect(),
        }));
        csv += &csv_matrix(&format!("{},{}", m.alpha, m.b), &mat);
        pretty += &pretty_matrix(&format!("J at moduli ({}, {}), chart {chart}", m.alpha, m.b), &mat);
        let _ = writeln!(pretty, "  |J^2 + id| = {:.3e}  |J^T J - id| = {:.3e}", sj.square_defect(), sj.orthogonality_defect());
    }
    let frame = g2sphere::charts::frame_at(chart, &y)?;
    let value = json!({
        "point": y.coords().iter().collect::<Vec<_>>(),
        "chart": chart,
        "frame": rows(&frame.b),
        "frame_residual": frame.invariant_residual(),
        "results": entries,
    });
    Ok(Outcome { ok: true, value, csv, pretty })
}

fn cmd_f(cli: &Cli, raw: &[String]) -> Res<Outcome> {
    if cli.exact {
        let x = point_exact(raw)?;
        let f = f_matrix(&x);
        let cells: Vec<Vec<String>> = (0..7).map(|i| (0..7).map(|j| f[(i, j)].to_string()).collect()).collect();
        let res = identity_residuals(&x);
        let auto = automorphism_residual(&f);
        let mut csv = String::from("row,col,value\n");
        let mut pretty = String::from("f(x) exact\n");
        for (i, r) in cells.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                let _ = writeln!(csv, "{i},{j},\"{c}\"");
            }
            let _ = writeln!(pretty, "  {}", r.iter().map(|c| format!("{c:>14}")).collect::<Vec<_>>().join(" "));
        }
        let ok = res.iter().all(|&r| r == 0.0) && auto == 0.0;
        let value = json!({"exact": true, "matrix": cells, "fixed_point_residual": res[0], "cube_residual": res[1], "projector_residual": res[2], "automorphism_residual": auto});
        return Ok(Outcome { ok, value, csv, pretty });
    }
    let x = point_f64(cli, raw)?;
    let f = f_matrix(&x);
    let res = identity_residuals(&x);
    let orth = (f.transpose() * f - nalgebra::SMatrix::<f64, 7, 7>::identity()).abs().max();
    let auto = automorphism_residual(&f);
    let mat = rows(&f);
    let mut pretty = pretty_matrix("f(x)", &mat);
    let _ = writeln!(pretty, "  |fx - x| = {:.3e}  |f^3 - id| = {:.3e}  |f^T f - id| = {:.3e}  automorphism {:.3e}", res[0], res[1], orth, auto);
    let ok = res.iter().chain([&orth, &auto]).all(|&r| r < 1e-10);
    let value = json!({
        "point": x.coords().iter().collect::<Vec<_>>(),
        "matrix": mat,
        "fixed_point_residual": res[0],
        "cube_residual": res[1],
        "projector_residual": res[2],
        "orthogonality_residual": orth,
        "automorphism_residual": auto,
    });
    Ok(Outcome { ok, value, csv: format!("matrix,row,col,value\n{}", csv_matrix("f", &mat)), pretty })
}

fn complex_cells(m: &g2sphere::g2_algebra::CMat7<f64>) -> Vec<Vec<[f64; 2]>> {
    (0..7).map(|i| (0..7).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn cmd_basis(cli: &Cli) -> Res<Outcome> {
    let ms = moduli_f64(cli)?;
    let m = first_or_default(ms, Moduli::new(1.0, 1.0)?);
    if m.alpha == 0.0 {
        return Err(Failure::Config("basis needs a finite a = 1/alpha (alpha != 0)".into()));
    }
    let a = 1.0 / m.alpha;
    if a <= 0.0 {
        return Err(Failure::Config("basis needs a = 1/alpha > 0".into()));
    }
    let rb = root_basis(a, m.b)?;
    let real = RealBasis::<f64>::standard();
    let mut root = serde_json::Map::new();
    let mut csv = String::from("basis,name,row,col,re,im\n");
    let mut pretty = String::new();
    for (name, e) in ROOT_NAMES.iter().zip(rb.elements()) {
        root.insert(name.to_string(), json!(complex_cells(&e)));
        for i in 0..7 {
            for j in 0..7 {
                let z = e[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    let _ = writeln!(csv, "root,{name},{i},{j},{:e},{:e}", z.re, z.im);
                }
            }
        }
        let re = rows(&e.map(|z| z.re));
        let im = rows(&e.map(|z| z.im));
        pretty += &pretty_matrix(&format!("{name} (real part)"), &re);
        pretty += &pretty_matrix(&format!("{name} (imaginary part)"), &im);
    }
    let mut realmap = serde_json::Map::new();
    for (name, e) in REAL_NAMES.iter().zip(real.elems.iter()) {
        let r = rows(e);
        realmap.insert(name.to_string(), json!(r));
        for (i, row) in r.iter().enumerate() {
            for (j, v) in row.iter().enumerate().filter(|(_, v)| **v != 0.0) {
                let _ = writeln!(csv, "real,{name},{i},{j},{v:e},0e0");
            }
        }
    }
    let value = json!({"a": a, "b": m.b, "root": root, "real": realmap});
    Ok(Outcome { ok: true, value, csv, pretty })
}

fn cmd_polys(cli: &Cli) -> Res<Outcome> {
    let ms = moduli_exact(cli)?;
    let m = first_or_default(ms, Moduli::new(QuadScalar::from_int(1), QuadScalar::from_int(1))?);
    let e = extract_matrix_elements(&m)?;
    let mut csv = String::from("table,i,j,monomial,coefficient\n");
    for (i, row) in e.p.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            for (mono, c) in p.to_map() {
                let _ = writeln!(csv, "P,{},{},{mono},\"{c}\"", i + 1, j + 1);
            }
        }
    }
    for (mono, c) in e.q0.to_map() {
        let _ = writeln!(csv, "Q0,,,{mono},\"{c}\"");
    }
    for (i, row) in e.q.iter().enumerate() {
        for (j, p) in row.iter().enumerate().skip(i) {
            for (mono, c) in p.to_map() {
                let _ = writeln!(csv, "Q,{},{},{mono},\"{c}\"", i + 1, j + 1);
            }
        }
    }
    let s = e.stats();
    let mut pretty = format!(
        "moduli alpha = {}, b = {}\nnonzero P: {}  nonzero Q (incl. Q0): {}  max terms: {}  max degree in x: {}\n",
        m.alpha, m.b, s.nonzero_p, s.nonzero_q, s.max_terms, s.max_x_degree
    );
    for (i, row) in e.p.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let _ = writeln!(pretty, "P{}{} = {p}", i + 1, j + 1);
        }
    }
    Ok(Outcome { ok: true, value: e.to_json(), csv, pretty })
}

fn cmd_orbit_dim(cli: &Cli, scale: f64) -> Res<Outcome> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Failure::Config("--complex-scale must be a finite non-negative number".into()));
    }
    let ms = moduli_f64(cli)?;
    let ms = if ms.is_empty() { vec![Moduli::new(1.0, 1.0)?] } else { ms };
    let mut tol = g2sphere::orbit_analysis::EIGEN_TOL;
    for t in &cli.tol {
        match t.split_once('=') {
            Some(("eigen", v)) => tol = parse_f64(v)?,
            _ => return Err(Failure::Config(format!("orbit-dim accepts only --tol eigen=VAL, got {t:?}"))),
        }
    }
    let mut rows_out = Vec::new();
    let mut csv = String::from("sample,alpha,b,dim_s,dim_conj_s\n");
    let mut pretty = String::new();
    let mut ok = true;
    for s in 0..cli.samples {
        let mut rng = Rng::stream(cli.seed, s as u64);
        let g = if scale == 0.0 { random_real_g2(&mut rng) } else { random_complex_g2(&mut rng, scale) };
        for m in &ms {
            let d = orbit_dims(m, &g, tol)?;
            ok &= d.dim_s == 3 && d.dim_conj_s == 3;
            let _ = writeln!(csv, "{s},{},{},{},{}", m.alpha, m.b, d.dim_s, d.dim_conj_s);
            let _ = writeln!(pretty, "sample {s:>3}  moduli ({}, {})  dims ({}, {})", m.alpha, m.b, d.dim_s, d.dim_conj_s);
            rows_out.push(json!({"sample": s, "moduli": {"alpha": m.alpha, "b": m.b}, "dims": [d.dim_s, d.dim_conj_s], "spectrum_s": d.spectrum_s, "spectrum_conj_s": d.spectrum_conj_s}));
        }
    }
    let value = json!({"seed": cli.seed, "complex_scale": scale, "rows": rows_out});
    Ok(Outcome { ok, value, csv, pretty })
}

fn render(cli: &Cli, o: &Outcome) -> String {
    match cli.format {
        Format::Json => serde_json::to_string_pretty(&o.value).expect("serializable") + "\n",
        Format::Csv => o.csv.clone(),
        Format::Pretty => o.pretty.clone(),
    }
}

fn run(cli: &Cli) -> Res<Outcome> {
    if cli.samples == 0 {
        return Err(Failure::Config("--samples must be at least 1".into()));
    }
    if cli.exact && !matches!(cli.command, Command::F { .. } | Command::Polys) {
        return Err(Failure::Config("--exact is supported by f and polys".into()));
    }
    if !matches!(cli.command, Command::Verify | Command::OrbitDim { .. }) && !cli.tol.is_empty() {
        return Err(Failure::Config("--tol applies to verify and orbit-dim".into()));
    }
    match &cli.command {
        Command::Verify => cmd_verify(cli),
        Command::J { point, chart } => cmd_j(cli, point, *chart),
        Command::F { point } => cmd_f(cli, point),
        Command::Basis => cmd_basis(cli),
        Command::Polys => cmd_polys(cli),
        Command::OrbitDim { complex_scale } => cmd_orbit_dim(cli, *complex_scale),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(o) => {
            let text = render(&cli, &o);
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}

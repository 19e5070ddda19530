//! Command-line front end: argument parsing, experiment drivers and CSV
//! emission.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::coherent::{
    cat_state, eigen_residual, overlap_d, overlap_from_coefficients, CatSpec, CoherentSpec, Parity, Truncation,
};
use crate::dynamics::{
    cat_density_report, count_peaks, density, density_field, energy_closed_form_c, energy_curve, energy_expectation,
    one_period, SAMPLES_PER_PERIOD,
};
use crate::error::Error;
use crate::ladder::{
    c_differential_error, c_raise_element, commutator_cc_dagger_eigenvalue, commutator_from_elements, LadderKind, Mu,
    SINGULAR_EXCLUSION,
};
use crate::spectrum::{orthonormality_error, SpatialGrid, SystemTag};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "exo-coherent", version, about = "Coherent and cat states of a rationally extended oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Position density of coherent states over a grid and time samples.
    Density(DensityArgs),
    /// Energy expectation against |z|.
    Energy(SweepArgs),
    /// Overlap D(|z|) = <-z|z> against |z|.
    Overlap(SweepArgs),
    /// Density of even or odd cat states and its value at the origin.
    Cat(CatArgs),
    /// Run the numerical self-checks and print one line per check.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LadderArg {
    A,
    C,
    Ctilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Ladder family; when omitted, a, c(mu) and ctilde(mu) are all written.
    #[arg(long, value_enum)]
    pub ladder: Option<LadderArg>,
    /// Lowest weight of the c ladder: -3, 1 or 2.
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub mu: i64,
    /// Coherent-state eigenvalue as `re,im` (a lone real part is accepted).
    #[arg(long, default_value = "15,0", allow_hyphen_values = true, value_parser = parse_z)]
    pub z: Complex64,
    /// Maximum number of expansion coefficients.
    #[arg(long, default_value_t = 5000)]
    pub kmax: usize,
    /// Relative tail weight at which coefficient series stop.
    #[arg(long, default_value_t = 1e-28)]
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 4001)]
    pub nx: usize,
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    /// Single time instant.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "t_samples")]
    pub t: Option<f64>,
    /// Number of equally spaced samples over one period (default 64).
    #[arg(long)]
    pub t_samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// Output CSV; with several ladders the ladder label is appended to the stem.
    #[arg(long, default_value = "density.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub ladder: Option<LadderArg>,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub mu: i64,
    /// Largest |z| of the sweep, which starts at 0.
    #[arg(long, default_value_t = 15.0)]
    pub z_max: f64,
    /// Number of |z| samples including both ends.
    #[arg(long, default_value_t = 61)]
    pub z_steps: usize,
    #[arg(long, default_value_t = 5000)]
    pub kmax: usize,
    #[arg(long, default_value_t = 1e-28)]
    pub tail_tol: f64,
    /// Output CSV (default `energy.csv` or `overlap.csv`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CatArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    #[arg(long, value_enum, default_value_t = ParityArg::Even)]
    pub parity: ParityArg,
    #[arg(long, default_value = "cat.csv")]
    pub out: PathBuf,
    /// Output for `t,rho_at_0` (default: `<out stem>_nodal.csv`).
    #[arg(long)]
    pub nodal_out: Option<PathBuf>,
}

fn parse_z(s: &str) -> std::result::Result<Complex64, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().map(str::trim).unwrap_or("0");
    if parts.next().is_some() {
        return Err(format!("expected `re,im`, got `{s}`"));
    }
    let re: f64 = re.parse().map_err(|_| format!("bad real part in `{s}`"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in `{s}`"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("z must be finite, got `{s}`"));
    }
    Ok(Complex64::new(re, im))
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Truncation(String),
    Verify,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Truncation(_) => EXIT_TRUNCATION,
            Failure::Verify => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TruncationCap(_) => Failure::Truncation(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn ladders(arg: Option<LadderArg>, mu: i64) -> CliResult<Vec<LadderKind>> {
    let mu = Mu::try_from(mu)?;
    Ok(match arg {
        None => vec![LadderKind::A, LadderKind::C(mu), LadderKind::CTilde(mu)],
        Some(LadderArg::A) => vec![LadderKind::A],
        Some(LadderArg::C) => vec![LadderKind::C(mu)],
        Some(LadderArg::Ctilde) => vec![LadderKind::CTilde(mu)],
    })
}

fn truncation(kmax: usize, tail_tol: f64) -> CliResult<Truncation> {
    if kmax == 0 || !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Failure::Config("kmax must be positive and tail-tol in (0, 1)".into()));
    }
    Ok(Truncation { tail_tol, k_max: kmax })
}

fn grid(args: &GridArgs) -> CliResult<SpatialGrid> {
    Ok(SpatialGrid::new(args.xmin, args.xmax, args.nx)?)
}

fn times(args: &TimeArgs, period: f64) -> CliResult<Vec<f64>> {
    match (args.t, args.t_samples) {
        (Some(t), _) if t.is_finite() => Ok(vec![t]),
        (Some(_), _) => Err(Failure::Config("t must be finite".into())),
        (None, Some(0)) => Err(Failure::Config("t-samples must be positive".into())),
        (None, n) => Ok(one_period(period, n.unwrap_or(SAMPLES_PER_PERIOD))),
    }
}

/// `dir/stem_suffix.ext`.
fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

fn output_for(path: &Path, ladder: LadderKind, several: bool) -> PathBuf {
    if several {
        with_suffix(path, &ladder.label())
    } else {
        path.to_path_buf()
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn format_z(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

pub fn cmd_density(args: &DensityArgs) -> CliResult<()> {
    let list = ladders(args.state.ladder, args.state.mu)?;
    let trunc = truncation(args.state.kmax, args.state.tail_tol)?;
    let grid = grid(&args.grid)?;
    for &ladder in &list {
        let ts = times(&args.time, ladder.period())?;
        let state = CoherentSpec::new(ladder, args.state.z).coefficients(trunc)?;
        let field = density_field(&state, &grid, &ts);
        let path = output_for(&args.out, ladder, list.len() > 1);
        let mut out = create(&path)?;
        field.write_csv(&mut out)?;
        out.flush()?;
        println!(
            "density ladder={} z={} times={} points={} norm_deficit={:.3e} peaks_at_t0={} file={}",
            ladder.label(),
            format_z(args.state.z),
            ts.len(),
            grid.n_points,
            field.max_norm_deficit(),
            count_peaks(&grid, field.at_time(0)),
            path.display()
        );
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> CliResult<Vec<f64>> {
    if args.z_steps < 2 || !(args.z_max > 0.0 && args.z_max.is_finite()) {
        return Err(Failure::Config("need z-steps >= 2 and a positive z-max".into()));
    }
    let n = args.z_steps - 1;
    Ok((0..=n).map(|j| args.z_max * j as f64 / n as f64).collect())
}

pub fn cmd_energy(args: &SweepArgs) -> CliResult<()> {
    let list = ladders(args.ladder, args.mu)?;
    let trunc = truncation(args.kmax, args.tail_tol)?;
    let zs = sweep(args)?;
    let base = args.out.clone().unwrap_or_else(|| PathBuf::from("energy.csv"));
    for &ladder in &list {
        let curve = energy_curve(ladder, &zs, trunc)?;
        let path = output_for(&base, ladder, list.len() > 1);
        let mut out = create(&path)?;
        curve.write_csv(&mut out)?;
        out.flush()?;
        let worst =
            curve.samples.iter().map(|s| ((s.energy - s.closed_form) / s.closed_form).abs()).fold(0.0, f64::max);
        let last = curve.samples.last().expect("at least two samples");
        println!(
            "energy ladder={} start={:.10} end={:.10} monotone={} closed_form_max_rel={:.3e} file={}",
            ladder.label(),
            curve.samples[0].energy,
            last.energy,
            curve.is_monotone(),
            worst,
            path.display()
        );
    }
    Ok(())
}

pub fn cmd_overlap(args: &SweepArgs) -> CliResult<()> {
    let list = ladders(args.ladder, args.mu)?;
    let trunc = truncation(args.kmax, args.tail_tol)?;
    let zs = sweep(args)?;
    let base = args.out.clone().unwrap_or_else(|| PathBuf::from("overlap.csv"));
    for &ladder in &list {
        let path = output_for(&base, ladder, list.len() > 1);
        let mut out = create(&path)?;
        writeln!(out, "z_abs,D")?;
        let mut worst: f64 = 0.0;
        for &r in &zs {
            let d = overlap_d(r, ladder)?;
            let summed = overlap_from_coefficients(r, ladder, trunc)?;
            worst = worst.max((d - summed).abs());
            writeln!(out, "{r:.16e},{d:.16e}")?;
        }
        out.flush()?;
        println!(
            "overlap ladder={} max_abs_diff_vs_coefficients={:.3e} file={}",
            ladder.label(),
            worst,
            path.display()
        );
    }
    Ok(())
}

pub fn cmd_cat(args: &CatArgs) -> CliResult<()> {
    let list = ladders(args.state.ladder, args.state.mu)?;
    let trunc = truncation(args.state.kmax, args.state.tail_tol)?;
    let grid = grid(&args.grid)?;
    let parity = match args.parity {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    };
    let several = list.len() > 1;
    for &ladder in &list {
        let ts = times(&args.time, ladder.period())?;
        let spec = CatSpec { base: CoherentSpec::new(ladder, args.state.z), parity };
        let report = cat_density_report(spec, &grid, &ts, trunc)?;
        let path = output_for(&args.out, ladder, several);
        let nodal = match &args.nodal_out {
            Some(p) => output_for(p, ladder, several),
            None => with_suffix(&path, "nodal"),
        };
        let mut out = create(&path)?;
        report.field.write_csv(&mut out)?;
        out.flush()?;
        let mut out = create(&nodal)?;
        report.write_origin_csv(&mut out)?;
        out.flush()?;
        let origin: Vec<f64> = report.origin_trace.iter().map(|&(_, r)| r).collect();
        let min0 = origin.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "cat ladder={} parity={:?} z={} norm_deficit={:.3e} rho0_max={:.6e} rho0_min={:.6e} file={} nodal={}",
            ladder.label(),
            args.parity,
            format_z(args.state.z),
            report.field.max_norm_deficit(),
            report.max_origin_density(),
            min0,
            path.display(),
            nodal.display()
        );
    }
    Ok(())
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, measured: f64, tolerance: f64) -> Self {
        Check { name: name.into(), measured, tolerance, passed: measured <= tolerance }
    }

    pub fn line(&self) -> String {
        format!(
            "check={} measured={:.6e} tolerance={:.1e} status={}",
            self.name,
            self.measured,
            self.tolerance,
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Largest relative deviation of the coefficient-sum energy from the
    /// shifted and printed closed forms.
    pub shifted_deviation: f64,
    pub printed_deviation: f64,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn winner(&self) -> &'static str {
        match (self.shifted_deviation <= 1e-8, self.printed_deviation <= 1e-8) {
            (true, false) => "shifted",
            (false, true) => "printed",
            (true, true) => "both",
            (false, false) => "neither",
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Runs the self-checks behind `verify`.
pub fn verification_report() -> crate::Result<VerifyReport> {
    let trunc = Truncation::default();
    let mut checks = Vec::new();

    checks.push(Check::at_most("orthonormality_minus", orthonormality_error(SystemTag::Minus, 30), 1e-8));
    checks.push(Check::at_most("orthonormality_plus", orthonormality_error(SystemTag::Plus, 30), 1e-8));

    let mut worst: f64 = 0.0;
    for nu in (-3..=20).filter(|&n| SystemTag::Minus.is_valid_index(n)) {
        worst = worst.max(rel(commutator_from_elements(nu)?, commutator_cc_dagger_eigenvalue(nu)?));
    }
    checks.push(Check::at_most("commutator_q_difference", worst, 1e-10));
    let lowest = c_raise_element(-3).powi(2);
    checks.push(Check::at_most(
        "commutator_lowest_weight",
        rel(lowest, 48.0).max(rel(commutator_cc_dagger_eigenvalue(-3)?, 48.0)),
        1e-10,
    ));

    let points: Vec<f64> =
        SpatialGrid::symmetric(8.0, 1601)?.points().into_iter().filter(|x| x.abs() >= SINGULAR_EXCLUSION).collect();
    let mut lowering: f64 = 0.0;
    for nu in 3..=12 {
        lowering = lowering.max(c_differential_error(nu, &points)?);
    }
    checks.push(Check::at_most("c_differential_action", lowering, 1e-5));
    let mut zero_modes: f64 = 0.0;
    for nu in [-3, 1, 2] {
        zero_modes = zero_modes.max(c_differential_error(nu, &points)?);
    }
    checks.push(Check::at_most("c_differential_zero_modes", zero_modes, 1e-5));

    let mut residual: f64 = 0.0;
    for ladder in LadderKind::all() {
        for r in [1.0, 15.0] {
            let z = Complex64::new(r, 0.0);
            residual = residual.max(eigen_residual(&CoherentSpec::new(ladder, z).coefficients(trunc)?, z)?);
        }
    }
    checks.push(Check::at_most("eigen_residual", residual, 1e-8));
    let mut large: f64 = 0.0;
    for mu in Mu::ALL {
        let z = Complex64::new(100.0, 0.0);
        large = large.max(eigen_residual(&CoherentSpec::new(LadderKind::C(mu), z).coefficients(trunc)?, z)?);
    }
    checks.push(Check::at_most("eigen_residual_c_z100", large, 1e-8));

    let mut exp_law: f64 = 0.0;
    for ladder in LadderKind::all().into_iter().filter(|l| !matches!(l, LadderKind::C(_))) {
        for j in 0..=24 {
            let r = 0.25 * j as f64;
            exp_law = exp_law.max(rel(overlap_d(r, ladder)?, (-r * r).exp()));
        }
    }
    checks.push(Check::at_most("overlap_exponential", exp_law, 1e-12));
    let mut c_overlap: f64 = 0.0;
    for mu in Mu::ALL {
        for r in [1.0, 5.0, 15.0] {
            let ladder = LadderKind::C(mu);
            c_overlap = c_overlap.max((overlap_d(r, ladder)? - overlap_from_coefficients(r, ladder, trunc)?).abs());
        }
    }
    checks.push(Check::at_most("overlap_c_coefficient_sum", c_overlap, 1e-10));

    let z15 = Complex64::new(15.0, 0.0);
    let mut energies = rel(energy_expectation(&CoherentSpec::new(LadderKind::A, z15).coefficients(trunc)?), 231.0);
    for mu in Mu::ALL {
        let e = energy_expectation(&CoherentSpec::new(LadderKind::CTilde(mu), z15).coefficients(trunc)?);
        energies = energies.max(rel(e, 6.0 + 2.0 * mu.value() as f64 + 675.0));
    }
    checks.push(Check::at_most("energy_closed_forms", energies, 1e-10));

    let (mut shifted, mut printed): (f64, f64) = (0.0, 0.0);
    for mu in Mu::ALL {
        for r in [1.0, 5.0, 15.0] {
            let e =
                energy_expectation(&CoherentSpec::new(LadderKind::C(mu), Complex64::new(r, 0.0)).coefficients(trunc)?);
            let cf = energy_closed_form_c(r, mu)?;
            shifted = shifted.max(rel(e, cf.shifted));
            printed = printed.max(rel(e, cf.printed));
        }
    }
    let exactly_one = (shifted <= 1e-8) != (printed <= 1e-8);
    checks.push(Check {
        name: "energy_c_unique_closed_form".into(),
        measured: shifted.min(printed),
        tolerance: 1e-8,
        passed: exactly_one,
    });

    let grid = SpatialGrid::default();
    let mut gauss: f64 = 0.0;
    let a2 = CoherentSpec::new(LadderKind::A, Complex64::new(2.0, 0.0)).coefficients(trunc)?;
    for t in [0.0, std::f64::consts::PI / 8.0, std::f64::consts::PI / 4.0] {
        let rho = density(&a2, &grid, t);
        for (x, r) in grid.points().iter().zip(&rho) {
            let g = (-(x - 2.0 * (2.0 * t).cos()).powi(2)).exp() / std::f64::consts::PI.sqrt();
            gauss = gauss.max((r - g).abs());
        }
    }
    checks.push(Check::at_most("density_gaussian_law", gauss, 1e-6));

    let mut nodal: f64 = 0.0;
    for ladder in [LadderKind::A, LadderKind::C(Mu::MinusThree)] {
        let spec = CatSpec { base: CoherentSpec::new(ladder, z15), parity: Parity::Odd };
        let state = cat_state(spec, trunc)?;
        let ts = one_period(ladder.period(), SAMPLES_PER_PERIOD);
        nodal = nodal.max(crate::dynamics::density_trace(&state, 0.0, &ts).into_iter().fold(0.0, f64::max));
    }
    checks.push(Check::at_most("cat_odd_nodal_line", nodal, 1e-10));
    let mut cross: f64 = 0.0;
    for ladder in LadderKind::all() {
        let even = cat_state(CatSpec { base: CoherentSpec::new(ladder, z15), parity: Parity::Even }, trunc)?;
        let odd = cat_state(CatSpec { base: CoherentSpec::new(ladder, z15), parity: Parity::Odd }, trunc)?;
        cross = cross.max(even.inner(&odd)?.norm());
    }
    checks.push(Check::at_most("cat_parity_overlap", cross, 0.0));

    Ok(VerifyReport { checks, shifted_deviation: shifted, printed_deviation: printed })
}

pub fn cmd_verify() -> CliResult<()> {
    let report = verification_report()?;
    for c in &report.checks {
        println!("{}", c.line());
    }
    println!(
        "adjudication quantity=energy_c shifted_max_rel={:.6e} printed_max_rel={:.6e} winner={}",
        report.shifted_deviation,
        report.printed_deviation,
        report.winner()
    );
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("summary passed={} failed={}", report.checks.len() - failed, failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Density(a) => cmd_density(a),
        Command::Energy(a) => cmd_energy(a),
        Command::Overlap(a) => cmd_overlap(a),
        Command::Cat(a) => cmd_cat(a),
        Command::Verify => cmd_verify(),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: {m}"),
                Failure::Truncation(m) => eprintln!("error: {m}"),
                Failure::Verify => eprintln!("error: verification failed"),
            }
            f.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_parsing() {
        assert_eq!(parse_z("15,0").unwrap(), Complex64::new(15.0, 0.0));
        assert_eq!(parse_z("-1.5, 2").unwrap(), Complex64::new(-1.5, 2.0));
        assert_eq!(parse_z("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_z("1,2,3").is_err());
        assert!(parse_z("x,0").is_err());
        assert!(parse_z("nan,0").is_err());
    }

    #[test]
    fn suffixed_paths() {
        assert_eq!(with_suffix(Path::new("out/rho.csv"), "a"), PathBuf::from("out/rho_a.csv"));
        assert_eq!(with_suffix(Path::new("rho"), "nodal"), PathBuf::from("rho_nodal"));
    }

    #[test]
    fn ladder_selection() {
        assert_eq!(ladders(None, 1).unwrap(), vec![LadderKind::A, LadderKind::C(Mu::One), LadderKind::CTilde(Mu::One)]);
        assert_eq!(ladders(Some(LadderArg::Ctilde), -3).unwrap(), vec![LadderKind::CTilde(Mu::MinusThree)]);
        assert_eq!(ladders(Some(LadderArg::A), 0).unwrap_err().exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn parses_negative_values() {
        let cli =
            Cli::try_parse_from(["x", "density", "--ladder", "ctilde", "--mu", "-3", "--z", "-2,1", "--xmin", "-5"])
                .unwrap();
        match cli.command {
            Command::Density(a) => {
                assert_eq!(a.state.mu, -3);
                assert_eq!(a.state.z, Complex64::new(-2.0, 1.0));
                assert_eq!(a.grid.xmin, -5.0);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["x", "density", "--t", "0", "--t-samples", "3"]).is_err());
    }

    #[test]
    fn truncation_cap_maps_to_exit_three() {
        assert_eq!(Failure::from(Error::TruncationCap(4)).exit_code(), EXIT_TRUNCATION);
        assert_eq!(Failure::from(Error::DegenerateCat).exit_code(), EXIT_CONFIG);
    }
}

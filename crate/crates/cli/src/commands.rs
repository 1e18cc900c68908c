use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use xxzge::geometric::{max_overlap, SweepOptions};
use xxzge::scan::{
    apply_decay, beta_grid, beta_scan, detect_crossing, detect_jump, gamma_grid, gamma_scan,
    ground_for, rescale, DecayModel, ScanTable, CROSSING_WINDOW, DEFAULT_FIT_DEGREE,
    DEFAULT_GAMMA_MAX, DEFAULT_GAMMA_MIN, DEFAULT_GAMMA_STEP, DEFAULT_JUMP_THRESHOLD,
};
use xxzge::Error;

use crate::output::{self, num, Format, Report};

/// Ground states, geometric entanglement and transition detection for periodic XXZ rings.
#[derive(Debug, Parser)]
#[command(name = "xxzge", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate energy, candidate overlaps and entanglement over a gamma grid.
    Scan(ScanArgs),
    /// Maximal product-state overlap of a single ground state.
    Ge(GeArgs),
    /// Overlap with rotated Neel states over beta in [0, pi].
    Beta(BetaArgs),
    /// Locate the entanglement jump and the overlap crossing.
    Detect(DetectArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Ring length (even).
    #[arg(long, default_value_t = 4)]
    pub n_sites: usize,
    /// Seed for the random restarts of the overlap search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_GAMMA_MIN, allow_negative_numbers = true)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA_MAX, allow_negative_numbers = true)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA_STEP)]
    pub gamma_step: f64,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    /// Attenuation of the |+-+-> overlap signal.
    #[arg(long, requires = "decay3")]
    pub decay2: Option<f64>,
    /// Attenuation of the |0101> overlap signal.
    #[arg(long, requires = "decay2")]
    pub decay3: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Scan this single point instead of a grid.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["gamma_min", "gamma_max", "gamma_step"])]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub decay: DecayArgs,
}

#[derive(Debug, Args)]
pub struct GeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
}

#[derive(Debug, Args)]
pub struct BetaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 64)]
    pub beta_steps: usize,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub decay: DecayArgs,
}

/// Failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    FeatureNotFound(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::FeatureNotFound(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::FeatureNotFound(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoCrossing { .. } | Error::NoJump { .. } => CliError::FeatureNotFound(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan(a) => cmd_scan(&a),
        Command::Ge(a) => cmd_ge(&a),
        Command::Beta(a) => cmd_beta(&a),
        Command::Detect(a) => cmd_detect(&a),
    }
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_writable(common: &Common) -> Result<(), CliError> {
    if let Some(path) = &common.out {
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn sweep_options(common: &Common) -> SweepOptions {
    SweepOptions::default().with_seed(common.seed)
}

fn decay_model(d: &DecayArgs) -> Result<Option<DecayModel>, CliError> {
    match (d.decay2, d.decay3) {
        (Some(a2), Some(a3)) => Ok(Some(DecayModel::new(a2, a3)?)),
        (None, None) => Ok(None),
        _ => Err(CliError::Usage("--decay2 and --decay3 go together".into())),
    }
}

fn grid_points(g: &GridArgs) -> Result<Vec<f64>, CliError> {
    let grid = gamma_grid(g.gamma_min, g.gamma_max, g.gamma_step)?;
    if grid.offset_applied {
        eprintln!(
            "note: gamma = -1 replaced by {} and {}",
            num(-1.0 - g.gamma_step / 2.0),
            num(-1.0 + g.gamma_step / 2.0)
        );
    }
    Ok(grid.points)
}

pub fn cmd_scan(a: &ScanArgs) -> Result<(), CliError> {
    let decay = decay_model(&a.decay)?;
    let grid = match a.gamma {
        Some(g) => vec![g],
        None => grid_points(&a.grid)?,
    };
    check_writable(&a.common)?;
    let mut table = gamma_scan(&grid, a.common.n_sites, &sweep_options(&a.common))?;
    if let Some(m) = decay {
        table = apply_decay(&table, &m);
    }
    emit(&a.common, &output::scan_table(&table, a.common.format))
}

pub fn cmd_ge(a: &GeArgs) -> Result<(), CliError> {
    check_writable(&a.common)?;
    let gs = ground_for(a.common.n_sites, a.gamma)?;
    let r = max_overlap(&gs.state, &sweep_options(&a.common))?;
    let mut rep = Report::default();
    rep.line("gamma", num(a.gamma))
        .line("n_sites", a.common.n_sites)
        .line("seed", a.common.seed)
        .line("e_g", num(gs.energy))
        .line("lambda_max_sq", num(r.lambda_max_sq()))
        .line("e_log2", num(r.e_log2))
        .line("rounds_used", r.trace.rounds_used)
        .line("converged", r.trace.converged);
    for (i, q) in r.closest.locals().iter().enumerate() {
        let comps = [q[0].re, q[0].im, q[1].re, q[1].im].map(num).join(" ");
        rep.line(&format!("site_{}", i + 1), comps);
    }
    emit(&a.common, &rep.into_string())
}

pub fn cmd_beta(a: &BetaArgs) -> Result<(), CliError> {
    let betas = beta_grid(a.beta_steps)?;
    check_writable(&a.common)?;
    let scan = beta_scan(a.gamma, &betas, a.common.n_sites)?;
    emit(&a.common, &output::beta_table(&scan, a.common.format))
}

fn crossing_of(table: &ScanTable) -> Result<xxzge::scan::Crossing, CliError> {
    let (lo, hi) = CROSSING_WINDOW;
    let l2 = table.curve(lo, hi, |r| r.lambda2_sq);
    let l3 = table.curve(lo, hi, |r| r.lambda3_sq);
    if l2.len() < DEFAULT_FIT_DEGREE + 1 {
        return Err(CliError::FeatureNotFound(format!(
            "crossing: grid has {} points in [{}, {}], need at least {}",
            l2.len(),
            num(lo),
            num(hi),
            DEFAULT_FIT_DEGREE + 1
        )));
    }
    detect_crossing(&l2, &l3, DEFAULT_FIT_DEGREE).map_err(|e| match e {
        Error::Fit(m) => CliError::FeatureNotFound(format!("crossing: {m}")),
        other => CliError::from(other),
    })
}

pub fn cmd_detect(a: &DetectArgs) -> Result<(), CliError> {
    let decay = decay_model(&a.decay)?;
    let grid = grid_points(&a.grid)?;
    check_writable(&a.common)?;
    let table = gamma_scan(&grid, a.common.n_sites, &sweep_options(&a.common))?;

    let jump = detect_jump(&table, DEFAULT_JUMP_THRESHOLD)
        .map_err(|e| CliError::FeatureNotFound(format!("jump: {e}")))?;
    let crossing = crossing_of(&table)?;

    let mut rep = Report::default();
    rep.line("n_sites", a.common.n_sites)
        .line("jump_gamma", num(jump))
        .line("crossing_gamma", num(crossing.gamma))
        .line("crossing_sign_changes", crossing.sign_changes);
    if let Some(m) = decay {
        let decayed = apply_decay(&table, &m);
        let restored = rescale(&decayed, &m);
        let c_decayed = crossing_of(&decayed)?;
        let c_restored = crossing_of(&restored)?;
        rep.line("decay2", num(m.alpha2))
            .line("decay3", num(m.alpha3))
            .line("crossing_gamma_decayed", num(c_decayed.gamma))
            .line("crossing_gamma_rescaled", num(c_restored.gamma));
    }
    emit(&a.common, &rep.into_string())
}

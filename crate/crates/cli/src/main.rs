use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mkdv_surface::immersion::{preset, Preset};
use mkdv_surface::verify::{parse_checks, Check};
use mkdv_surface::{
    generate, Convention, Error, ExportFormat, Family, Grid, PresetId, SolitonParams, VerifyConfig,
};

#[derive(Parser)]
#[command(name = "mkdv-surface", version, about = "Soliton surfaces of the mKdV equation: generation, export and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a surface and export it as OBJ, CSV or JSON.
    Generate {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_enum, default_value_t = MeshFormat::Obj)]
        format: MeshFormat,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification checks over the grid. Exit status 1 if any check fails.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Comma-separated checks, or `all` for every check that applies.
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        tolerances: ToleranceArgs,
        /// Finite-difference step for the lax, willmore and shape checks.
        #[arg(long)]
        fd_step: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the figure presets.
    Presets {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshFormat {
    Obj,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Spectral3,
    Spectralgauge4,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Preset id (ex2..ex8); explicit flags override its values.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    nx: usize,
    #[arg(long, default_value_t = 101)]
    nt: usize,
    /// Use the position formulas exactly as printed instead of the connection-consistent ones.
    #[arg(long)]
    paper_literal: bool,
}

#[derive(Args)]
struct ToleranceArgs {
    #[arg(long)]
    tol_zerocurv: Option<f64>,
    #[arg(long)]
    tol_lax: Option<f64>,
    #[arg(long)]
    tol_compat: Option<f64>,
    #[arg(long)]
    tol_forms: Option<f64>,
    #[arg(long)]
    tol_weingarten: Option<f64>,
    #[arg(long)]
    tol_weingarten_paper_literal: Option<f64>,
    #[arg(long)]
    tol_willmore: Option<f64>,
    #[arg(long)]
    tol_shape: Option<f64>,
    #[arg(long)]
    tol_sphere: Option<f64>,
    #[arg(long)]
    tol_consistency: Option<f64>,
}

impl ToleranceArgs {
    fn to_map(&self) -> Result<BTreeMap<Check, f64>, Error> {
        let pairs = [
            (Check::ZeroCurvature, self.tol_zerocurv),
            (Check::Lax, self.tol_lax),
            (Check::Compatibility, self.tol_compat),
            (Check::Forms, self.tol_forms),
            (Check::Weingarten, self.tol_weingarten),
            (Check::WeingartenPaperLiteral, self.tol_weingarten_paper_literal),
            (Check::Willmore, self.tol_willmore),
            (Check::Shape, self.tol_shape),
            (Check::Sphere, self.tol_sphere),
            (Check::Consistency, self.tol_consistency),
        ];
        let mut out = BTreeMap::new();
        for (c, v) in pairs {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::NonFinite { name: "tolerance", value: v });
                }
                out.insert(c, v);
            }
        }
        Ok(out)
    }
}

struct Surface {
    family: Family,
    params: SolitonParams,
    grid: Grid,
    convention: Convention,
}

impl SurfaceArgs {
    fn resolve(&self) -> Result<Surface, Error> {
        let base: Option<Preset> = match &self.preset {
            Some(id) => Some(preset(id.parse::<PresetId>()?)),
            None => None,
        };
        let family = match (self.family, &base) {
            (Some(FamilyArg::Spectral3), _) => Family::Spectral3,
            (Some(FamilyArg::Spectralgauge4), _) => Family::SpectralGauge4,
            (None, Some(b)) => b.family,
            (None, None) => return Err(usage("--family or --preset is required")),
        };
        let bp = base.map(|b| b.params);
        let pick = |flag: Option<f64>, from: fn(&SolitonParams) -> f64, name: &str| {
            flag.or(bp.as_ref().map(from)).ok_or_else(|| usage(&format!("--{name} is required")))
        };
        let k1 = pick(self.k1, SolitonParams::k1, "k1")?;
        let lambda = pick(self.lambda, SolitonParams::lambda, "lambda")?;
        let mu = pick(self.mu, SolitonParams::mu, "mu")?;
        let nu = match family {
            Family::Spectral3 => {
                if self.nu.is_some_and(|v| v != 0.0) {
                    return Err(usage("--nu applies only to the spectralgauge4 family"));
                }
                0.0
            }
            Family::SpectralGauge4 => pick(self.nu, SolitonParams::nu, "nu")?,
        };
        let params = SolitonParams::new(k1, lambda, mu, nu)?;
        let ((x0, x1), (t0, t1)) = base.map(|b| b.window()).unwrap_or(((-3.0, 3.0), (-3.0, 3.0)));
        let grid = Grid::new(
            (self.x_min.unwrap_or(x0), self.x_max.unwrap_or(x1)),
            (self.t_min.unwrap_or(t0), self.t_max.unwrap_or(t1)),
            self.nx,
            self.nt,
        )?;
        let convention = if self.paper_literal { Convention::PaperLiteral } else { Convention::Connection };
        Ok(Surface { family, params, grid, convention })
    }
}

fn usage(msg: &str) -> Error {
    Error::Parse(msg.to_string())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn presets_text() -> String {
    let mut s = format!(
        "{:<4} {:<15} {:>4} {:>6} {:>8} {:>4}  {}\n",
        "id", "family", "k1", "lambda", "mu", "nu", "window"
    );
    for id in PresetId::ALL {
        let p = preset(id);
        let [k1, l, mu, nu] = p.labels;
        let w = p.half_width;
        s.push_str(&format!(
            "{:<4} {:<15} {:>4} {:>6} {:>8} {:>4}  [-{w},{w}]x[-{w},{w}]\n",
            id.name(),
            p.family.name(),
            k1,
            l,
            mu,
            nu
        ));
    }
    s
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Presets { format } => {
            let text = match format {
                ReportFormat::Text => presets_text(),
                ReportFormat::Json => {
                    let all: Vec<Preset> = PresetId::ALL.into_iter().map(preset).collect();
                    serde_json::to_string_pretty(&all).map_err(|e| Error::Parse(e.to_string()))? + "\n"
                }
            };
            emit(&None, &text)?;
            Ok(true)
        }
        Command::Generate { surface, format, out } => {
            let s = surface.resolve()?;
            let mesh = generate(s.family, &s.params, &s.grid, s.convention)?;
            let format = match format {
                MeshFormat::Obj => ExportFormat::Obj,
                MeshFormat::Csv => ExportFormat::Csv,
                MeshFormat::Json => ExportFormat::Json,
            };
            emit(&out, &mesh.export(format)?)?;
            Ok(true)
        }
        Command::Verify { surface, checks, tolerances, fd_step, format, out } => {
            let s = surface.resolve()?;
            let list = parse_checks(&checks)?;
            let mut cfg = VerifyConfig::new(s.family, s.params, s.grid);
            cfg.convention = s.convention;
            cfg.tolerances = tolerances.to_map()?;
            cfg.fd_step = fd_step;
            let report = mkdv_surface::verify(list.as_deref(), &cfg)?;
            let text = match format {
                ReportFormat::Text => report.to_text(),
                ReportFormat::Json => report.to_json() + "\n",
            };
            emit(&out, &text)?;
            Ok(report.all_pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stringnet::correspondence::verify_intertwining;
use stringnet::fusion_data::{builtin_category, load_category, verify_category, FusionCategory};
use stringnet::groupoid::{build_groupoid, verify_canonical_elements, verify_groupoid_axioms};
use stringnet::kitaev::{ground_space_dimension, GsdMethod, GsdResult, KitaevModel, DEFAULT_SEED, EXACT_LIMIT};
use stringnet::lattice::{build_lattice, builtin_lattice, SurfaceLattice};
use stringnet::levin_wen::{lw_ground_space_dimension, LevinWenModel, LwGsd};
use stringnet::report::VerificationReport;
use stringnet::representations::{block_dimensions, verify_semisimple_decomposition, verify_target_counital_module};
use stringnet::Error;

#[derive(Parser, Debug)]
#[command(name = "stringnet", version, about = "Quantum groupoids, generalized Kitaev models and Levin-Wen models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Builtin category name or path to a category JSON file.
    #[arg(long, global = true, default_value = "fibonacci")]
    category: String,
    /// Builtin lattice name or path to a lattice JSON file.
    #[arg(long, global = true, default_value = "theta_sphere")]
    lattice: String,
    #[arg(long, global = true, value_enum, default_value_t = Model::Kitaev)]
    model: Model,
    /// exact-trace or randomized-rank; chosen by dimension when omitted.
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Verify the category, its quantum groupoid and its representations.
    Verify,
    /// Ground-space dimension of one model on one lattice.
    Gsd,
    /// Compare the Kitaev and Levin-Wen ground spaces through Θ.
    Compare,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    Kitaev,
    Levinwen,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum Format {
    Json,
    Text,
}

/// Outcome of a command: the rendered report and whether it passed.
struct Outcome {
    json: String,
    text: String,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    category: String,
    groupoid_dim: usize,
    blocks: Vec<usize>,
    pass: bool,
    reports: Vec<VerificationReport>,
}

#[derive(Serialize)]
struct GsdOutput {
    model: Model,
    category: String,
    lattice: String,
    gsd: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    kitaev: Option<GsdResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    levinwen: Option<LwGsd>,
}

fn load_cat(src: &str) -> Result<FusionCategory, Error> {
    if Path::new(src).is_file() {
        let text = std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")))?;
        load_category(&text)
    } else {
        builtin_category(src)
    }
}

fn load_lat(src: &str) -> Result<SurfaceLattice, Error> {
    if Path::new(src).is_file() {
        let text = std::fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")))?;
        build_lattice(&text)
    } else {
        builtin_lattice(src)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn cmd_verify(cli: &Cli) -> Result<Outcome, Error> {
    let cat = load_cat(&cli.category)?;
    let cat_rep = verify_category(&cat, cli.tol);
    let mut reports = vec![cat_rep.clone()];
    let mut dim = 0;
    // the groupoid is only meaningful for consistent data
    if cat_rep.passed() {
        let g = build_groupoid(&cat)?;
        dim = g.dim();
        reports.push(verify_groupoid_axioms(&g, cli.tol));
        reports.push(verify_canonical_elements(&g, cli.tol));
        reports.push(verify_semisimple_decomposition(&g, cli.tol));
        reports.push(verify_target_counital_module(&g, cli.tol));
    }
    let pass = reports.iter().all(|r| r.passed());
    let out = VerifyOutput { category: cat.name.clone(), groupoid_dim: dim, blocks: block_dimensions(&cat), pass, reports };
    let mut text = format!("category {}: groupoid dim {}, blocks {:?}\n", out.category, out.groupoid_dim, out.blocks);
    for r in &out.reports {
        text.push_str(&r.to_text());
    }
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    Ok(Outcome { json: to_json(&out), text, pass })
}

fn parse_method(cli: &Cli, dim: usize) -> Result<GsdMethod, Error> {
    match &cli.method {
        Some(m) => m.parse(),
        None if dim <= EXACT_LIMIT => Ok(GsdMethod::ExactTrace),
        None => Ok(GsdMethod::RandomizedRank),
    }
}

fn cmd_gsd(cli: &Cli) -> Result<Outcome, Error> {
    let cat = load_cat(&cli.category)?;
    let lat = load_lat(&cli.lattice)?;
    lat.check_supported()?;
    let (gsd, kitaev, levinwen) = match cli.model {
        Model::Kitaev => {
            let g = build_groupoid(&cat)?;
            let k = KitaevModel::new(&g, &lat)?;
            let r = ground_space_dimension(&k, parse_method(cli, k.dim())?, cli.seed)?;
            (r.gsd, Some(r), None)
        }
        Model::Levinwen => {
            let lw = LevinWenModel::new(&cat, &lat)?;
            let r = lw_ground_space_dimension(&lw)?;
            (r.gsd, None, Some(r))
        }
    };
    let out = GsdOutput { model: cli.model, category: cat.name.clone(), lattice: lat.name.clone(), gsd, kitaev, levinwen };
    let method = out.kitaev.as_ref().map_or("dense".to_string(), |r| format!("{:?}", r.method));
    let text = format!(
        "model {:?} category {} lattice {}\ngsd {}\nmethod {} seed {}\n",
        cli.model, out.category, out.lattice, gsd, method, cli.seed
    );
    Ok(Outcome { json: to_json(&out), text, pass: true })
}

fn cmd_compare(cli: &Cli) -> Result<Outcome, Error> {
    let cat = load_cat(&cli.category)?;
    let lat = load_lat(&cli.lattice)?;
    let g = build_groupoid(&cat)?;
    let k = KitaevModel::new(&g, &lat)?;
    let lw = LevinWenModel::new(&cat, &lat)?;
    let rep = verify_intertwining(&k, &lw, cli.tol, cli.seed)?;
    let opt = |x: Option<f64>| x.map_or("skipped".to_string(), |r| format!("{r:.3e}"));
    let text = format!(
        "category {} lattice {}\ndim L^K_0 {} dim L^LW_0 {}\nintertwining residual {}\nflux residual {}\nleakage {}\ngram distortion {}\ngsd kitaev {} levinwen {}\n{}\n",
        rep.category,
        rep.lattice,
        rep.dim_k0,
        rep.dim_lw0,
        opt(rep.residual),
        opt(rep.flux_residual),
        opt(rep.leakage),
        opt(rep.gram_distortion),
        rep.gsd_k.map_or("skipped".to_string(), |g| g.to_string()),
        rep.gsd_lw,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    Ok(Outcome { json: to_json(&rep), text, pass: rep.pass })
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    if !(cli.tol > 0.0) {
        return Err(Error::Invalid("--tol must be positive".into()));
    }
    match cli.command {
        Command::Verify => cmd_verify(cli),
        Command::Gsd => cmd_gsd(cli),
        Command::Compare => cmd_compare(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::Consistency(_) | Error::NotVerified(_) | Error::Unstable(_) => 1,
                _ => 2,
            });
        }
    };
    let body = if cli.format == Format::Json { outcome.json + "\n" } else { outcome.text };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    eprintln!("runtime {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(if outcome.pass { 0 } else { 1 })
}

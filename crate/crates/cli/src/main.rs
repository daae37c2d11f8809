use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wlip_core::laws::{run_law, search, Instance, LawId, SearchConfig};
use wlip_core::maps::classify;
use wlip_core::metric::Carrier;
use wlip_core::model::{parse_model, render_model, Model};
use wlip_core::report::{
    catalog_report, classification_report, render_report, search_report, verdict_report, Report,
};
use wlip_core::structure::{product_base, ProductCarrier};
use wlip_core::topology::{
    enumerate_topologies, topology_from_family, topology_from_structure, FiniteTopology,
};
use wlip_core::uniformity::uniformity_from_structure;
use wlip_core::Error;

/// Decide weak Lipschitz structures, maps and laws on finite carriers.
#[derive(Debug, Parser)]
#[command(name = "wlip", version)]
struct Cli {
    /// Emit one JSON document instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,

    /// Reject carriers with more points than this.
    #[arg(long, global = true, default_value_t = 12)]
    max_points: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate { file: PathBuf },
    /// Classify a map between two bases.
    Classify {
        file: PathBuf,
        #[arg(long)]
        map: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Headline the strict-inequality reading of the local Lipschitz remark.
        #[arg(long)]
        strict_remark: bool,
    },
    /// Compute the topology or uniformity induced by a base.
    Induce {
        file: PathBuf,
        #[arg(long)]
        base: String,
        what: Induced,
        /// Topology: write a model with the space and the topology.
        /// Uniformity: write the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the product base of several bases and write it as a model.
    Product {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        bases: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// The law catalog.
    Law {
        #[command(subcommand)]
        command: LawCommand,
    },
    /// Enumerate finite objects.
    Enumerate {
        #[command(subcommand)]
        what: Enumerable,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Induced {
    Topology,
    Uniformity,
}

#[derive(Debug, Subcommand)]
enum LawCommand {
    /// List every law with its expected search outcome.
    List,
    /// Check one law on the objects of a model file.
    Check { id: String, file: PathBuf },
    /// Search seeded random instances for a counterexample.
    Search {
        id: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Report the counterexample without the point-removal shrink.
        #[arg(long)]
        no_shrink: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Enumerable {
    /// Every topology on n labeled points, in preorder-matrix order.
    Topologies {
        #[arg(long)]
        n: usize,
    },
}

/// A failed command: its exit code and message.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ImproperBase | Error::NotDominated(..) | Error::GenExhausted(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

struct Outcome {
    report: Report,
    code: u8,
}

fn ok(report: Report) -> Outcome {
    Outcome { report, code: 0 }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomically(path: &Path, text: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).map_err(|e| io_failure(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_failure(path, e))
}

fn check_points(n: usize, max: usize) -> Result<(), Failure> {
    if n > max {
        Err(usage(format!(
            "TOO_LARGE: {n} points exceed --max-points {max}"
        )))
    } else {
        Ok(())
    }
}

fn load(path: &Path, max: usize) -> Result<Model, Failure> {
    let model = parse_model(&read(path)?)?;
    check_points(model.max_points(), max)?;
    Ok(model)
}

fn opens_list(tau: &FiniteTopology) -> Vec<String> {
    match tau.opens() {
        Ok(opens) => opens.iter().map(ToString::to_string).collect(),
        Err(_) => vec![],
    }
}

fn validate(path: &Path, max: usize) -> Result<Outcome, Failure> {
    let text = read(path)?;
    let mut r = Report::new();
    let model = match parse_model(&text) {
        Ok(m) => m,
        Err(e @ Error::Parse { .. }) => return Err(e.into()),
        Err(e) => {
            r.bool("valid", false).text("error", e.to_string());
            return Ok(Outcome { report: r, code: 1 });
        }
    };
    check_points(model.max_points(), max)?;
    r.bool("valid", true)
        .int("spaces", model.spaces.len() as i64)
        .int("metrics", model.metrics.len() as i64)
        .int("bases", model.bases.len() as i64)
        .int("topologies", model.topologies.len() as i64)
        .int("families", model.families.len() as i64)
        .int("maps", model.maps.len() as i64);
    for b in &model.bases {
        let mut s = Report::new();
        s.text("space", b.value.space.clone())
            .text("kind", b.value.base.kind().to_string())
            .text("mode", format!("{:?}", b.value.base.mode()).to_lowercase())
            .bool("proper", b.value.base.is_proper());
        r.section(&format!("base.{}", b.name), s);
    }
    Ok(ok(r))
}

fn classify_cmd(
    path: &Path,
    max: usize,
    map: &str,
    from: &str,
    to: &str,
    strict_remark: bool,
) -> Result<Outcome, Failure> {
    let model = load(path, max)?;
    let f = model.map(map)?;
    let (bx, by) = (model.base_decl(from)?, model.base_decl(to)?);
    if bx.space != f.source || by.space != f.target {
        return Err(usage(format!(
            "map '{map}' goes {} -> {}, but the bases live on {} and {}",
            f.source, f.target, bx.space, by.space
        )));
    }
    let c = classify(&f.map, &bx.base, &by.base)?;
    let mut r = Report::new();
    r.text("map", map).text("from", from).text("to", to);
    for (k, v) in classification_report(&c, strict_remark).entries() {
        r.push(k.clone(), v.clone());
    }
    Ok(ok(r))
}

fn induce(
    path: &Path,
    max: usize,
    base: &str,
    what: Induced,
    out: Option<&Path>,
) -> Result<Outcome, Failure> {
    let model = load(path, max)?;
    let decl = model.base_decl(base)?;
    let b = &decl.base;
    let mut r = Report::new();
    r.text("base", base)
        .int("points", b.len() as i64)
        .bool("proper", b.is_proper());
    match what {
        Induced::Topology => {
            let tau = topology_from_structure(b);
            let fam = topology_from_family(b.len(), b.generators())?;
            r.list("opens", opens_list(&tau));
            r.list(
                "neighborhoods",
                tau.neighborhoods().iter().map(ToString::to_string),
            );
            r.list("family_opens", opens_list(&fam));
            r.bool("family_topology_equal", fam == tau);
            if let Some(out) = out {
                let space = &decl.space;
                let carrier = model.space(space)?.clone();
                let mut m = Model::new();
                m.add_space(space, carrier)?;
                let name = format!("{base}_topology");
                m.add_topology(&name, space, tau)?;
                write_atomically(out, &render_model(&m))?;
                r.text("written", out.display().to_string())
                    .text("topology_name", name);
            }
            Ok(ok(r))
        }
        Induced::Uniformity => {
            let code = match uniformity_from_structure(b) {
                Ok(u) => {
                    r.list(
                        "kernel",
                        u.kernel().pairs().map(|(a, c)| format!("({a},{c})")),
                    );
                    0
                }
                Err(e @ Error::ImproperBase) => {
                    r.null("kernel").text("error", e.to_string());
                    1
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(out) = out {
                write_atomically(out, &r.render_text())?;
            }
            Ok(Outcome { report: r, code })
        }
    }
}

fn product(path: &Path, max: usize, names: &[String], out: &Path) -> Result<Outcome, Failure> {
    let model = load(path, max)?;
    let decls = names
        .iter()
        .map(|n| model.base_decl(n))
        .collect::<Result<Vec<_>, _>>()?;
    let sizes: Vec<usize> = decls.iter().map(|d| d.base.len()).collect();
    let carrier = ProductCarrier::new(sizes.clone())?;
    check_points(carrier.len(), max)?;
    let p = product_base(&decls.iter().map(|d| &d.base).collect::<Vec<_>>())?;
    let labels = (0..carrier.len())
        .map(|i| {
            let t = carrier.tuple(i);
            let parts: Vec<String> = t
                .iter()
                .zip(&decls)
                .map(|(&k, d)| {
                    let c = model.space(&d.space).expect("resolved on load");
                    c.labels().map_or_else(|| k.to_string(), |ls| ls[k].clone())
                })
                .collect();
            format!("p{}", parts.join("."))
        })
        .collect();
    let space = format!("prod_{}", names.join("_"));
    let mut m = Model::new();
    m.add_space(&space, Carrier::with_labels(carrier.len(), labels)?)?;
    let metric_names: Vec<String> = (0..p.generators().len())
        .map(|i| format!("{space}_g{i}"))
        .collect();
    for (name, g) in metric_names.iter().zip(p.generators()) {
        m.add_metric(name, &space, g.clone())?;
    }
    let refs: Vec<&str> = metric_names.iter().map(String::as_str).collect();
    m.add_base(&space, &space, &refs)?;
    write_atomically(out, &render_model(&m))?;
    let mut r = Report::new();
    r.text("base", space.clone())
        .list("factor_sizes", sizes.iter().map(ToString::to_string))
        .int("points", carrier.len() as i64)
        .int("generators", p.generators().len() as i64)
        .text("kind", p.kind().to_string())
        .bool("proper", p.is_proper())
        .text("written", out.display().to_string());
    Ok(ok(r))
}

fn law_id(id: &str) -> Result<LawId, Failure> {
    LawId::from_code(id).ok_or_else(|| usage(format!("unknown law '{id}'; see `wlip law list`")))
}

fn law(cmd: &LawCommand, max: usize) -> Result<Outcome, Failure> {
    match cmd {
        LawCommand::List => Ok(ok(catalog_report())),
        LawCommand::Check { id, file } => {
            let law = law_id(id)?;
            let model = load(file, max)?;
            let inst = Instance::from_model(law.shape(), &model)?;
            let verdict = run_law(law, &inst)?;
            let code = if verdict.passed() { 0 } else { 1 };
            Ok(Outcome {
                report: verdict_report(law, &verdict),
                code,
            })
        }
        LawCommand::Search {
            id,
            n,
            seed,
            trials,
            workers,
            no_shrink,
        } => {
            let law = law_id(id)?;
            if *trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            check_points(*n, max)?;
            let config = SearchConfig {
                n: *n,
                seed: *seed,
                trials: *trials,
                workers: *workers,
                shrink: !no_shrink,
            };
            let outcome = search(law, &config)?;
            let code = if outcome.as_expected() { 0 } else { 1 };
            Ok(Outcome {
                report: search_report(&outcome),
                code,
            })
        }
    }
}

fn enumerate(what: &Enumerable, max: usize) -> Result<Outcome, Failure> {
    match what {
        Enumerable::Topologies { n } => {
            check_points(*n, max)?;
            let mut list = Report::new();
            let mut count = 0i64;
            for (k, (_, tau)) in enumerate_topologies(*n)?.enumerate() {
                list.text(&k.to_string(), opens_list(&tau).join(";"));
                count += 1;
            }
            let mut r = Report::new();
            r.int("n", *n as i64)
                .int("count", count)
                .section("topology", list);
            Ok(ok(r))
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let max = cli.max_points;
    match &cli.command {
        Command::Validate { file } => validate(file, max),
        Command::Classify {
            file,
            map,
            from,
            to,
            strict_remark,
        } => classify_cmd(file, max, map, from, to, *strict_remark),
        Command::Induce {
            file,
            base,
            what,
            out,
        } => induce(file, max, base, *what, out.as_deref()),
        Command::Product { file, bases, out } => product(file, max, bases, out),
        Command::Law { command } => law(command, max),
        Command::Enumerate { what } => enumerate(what, max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { report, code }) => {
            print!("{}", render_report(&report, cli.json));
            ExitCode::from(code)
        }
        Err(Failure { code, message }) => {
            if cli.json {
                let mut r = Report::new();
                r.text("error", message.clone());
                print!("{}", r.render_json());
            }
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

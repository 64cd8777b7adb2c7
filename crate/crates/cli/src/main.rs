use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use antimagic_core::io::{to_dot, GraphDoc, LabelingDoc};
use antimagic_core::oracle::{
    self, ChiLa, Constraints, ExactOptions, HeuristicOptions, SearchReport, SearchResult,
};
use antimagic_core::schemes::{self, LabelMatrix};
use antimagic_core::sweep::{self, Built, Family, Grid, InstanceSpec, Status};
use antimagic_core::transforms::{Side, Step};
use antimagic_core::{FamilyParams, Graph, Parity};

#[derive(Parser)]
#[command(
    name = "antimagic",
    version,
    about = "Local antimagic labelings of joins (2k)P2 v O_m"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one family instance and write graph, labeling, matrix and DOT files.
    Construct(ConstructArgs),
    /// Check a labeling JSON file (or a matrix CSV).
    Verify { file: PathBuf },
    /// Build and verify every instance on a parameter grid.
    Sweep(SweepArgs),
    /// Exact or heuristic search on a small graph.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Parity {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    U,
    V,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_enum, default_value = "even")]
    parity: ParityArg,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    r: Option<u32>,
    /// Block size (block-merge, split-G, delete-add, J1, J2).
    #[arg(long)]
    s: Option<u32>,
    /// Number of equal groups for the H families.
    #[arg(long, conflicts_with = "ks")]
    t: Option<u32>,
    /// Group sizes for the H families, comma separated.
    #[arg(long, value_delimiter = ',')]
    ks: Vec<u32>,
    /// Side merged by the J and H families; defaults by parity.
    #[arg(long, value_enum)]
    side: Option<SideArg>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    n_min: u32,
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 12)]
    k_max: u32,
    /// Restrict to one parity.
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Families to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_family)]
    families: Vec<Family>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the per-instance summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct OracleArgs {
    /// A built-in name (k3, p2, 2p2, c4, star3, 2p2o2, conjecture) or a
    /// graph / labeling JSON file.
    graph: String,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    /// Allowed colours, comma separated.
    #[arg(long, value_delimiter = ',')]
    colors: Vec<u64>,
    #[arg(long)]
    max_colors: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    restarts: u32,
    #[arg(long)]
    jobs: Option<usize>,
    /// Exact-search edge cap.
    #[arg(long, env = "ANTIMAGIC_EDGE_CAP", default_value_t = oracle::DEFAULT_EDGE_CAP)]
    edge_cap: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

/// Exit 1: the input was read but fails a check. Exit 2: bad input.
enum Failure {
    Check(String),
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(ctx: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{ctx}: {e}"))
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(input("thread pool"))?;
            Ok(pool.install(f))
        }
    }
}

fn fmt_set(s: &BTreeSet<u64>) -> String {
    let v: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", v.join(","))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(input(&path.display().to_string()))
}

fn construct(a: ConstructArgs) -> Outcome {
    let parity = match a.family {
        Family::MatrixEven => Parity::Even,
        Family::MatrixOdd => Parity::Odd,
        _ => a.parity.into(),
    };
    let mut params = FamilyParams::new(parity, a.n, a.k).map_err(input("parameters"))?;
    params.s = a.s;
    params.r = a.r;
    if matches!(
        a.family,
        Family::BlockMerge | Family::SplitG | Family::DeleteAdd | Family::DeleteAddSplit
    ) {
        match (a.r, a.s) {
            (Some(r), Some(s)) => {
                params = params
                    .with_factorization(r, s)
                    .map_err(input("parameters"))?
            }
            (Some(r), None) if r > 0 && a.k % r == 0 => {
                params = params
                    .with_factorization(r, a.k / r)
                    .map_err(input("parameters"))?
            }
            (None, Some(s)) if s > 0 && a.k % s == 0 => {
                params = params
                    .with_factorization(a.k / s, s)
                    .map_err(input("parameters"))?
            }
            _ => {
                return Err(Failure::Input(
                    "this family needs --r and --s with r*s = k".into(),
                ))
            }
        }
    }
    if matches!(a.family, Family::H1 | Family::H2) {
        let ks = match a.t {
            Some(t) if t > 0 && a.k % t == 0 => vec![a.k / t; t as usize],
            Some(t) => {
                return Err(Failure::Input(format!(
                    "k = {} is not divisible into {t} equal groups",
                    a.k
                )))
            }
            None if a.ks.is_empty() => vec![a.k],
            None => a.ks.clone(),
        };
        params = params.with_groups(ks).map_err(input("parameters"))?;
    }
    let side = match a.side {
        Some(SideArg::U) => Side::U,
        Some(SideArg::V) => Side::V,
        None => Side::default_for(parity),
    };
    let spec = InstanceSpec {
        family: a.family,
        params,
        side,
    };
    let built = sweep::build(&spec).map_err(input("construct"))?;
    fs::create_dir_all(&a.out).map_err(input(&a.out.display().to_string()))?;
    let lg = built.labeled();
    write(
        &a.out.join("graph.json"),
        &pretty(&GraphDoc::from_graph(lg.graph())),
    )?;
    write(
        &a.out.join("labeling.json"),
        &pretty(&LabelingDoc::from_labeled(lg)),
    )?;
    if let Built::Matrix(mx, _) = &built {
        write(&a.out.join("matrix.csv"), &mx.to_csv())?;
    }
    let coloring = lg.coloring();
    write(
        &a.out.join("graph.dot"),
        &to_dot(lg.graph(), Some(lg.labeling()), Some(&coloring)),
    )?;

    let v = lg.verify();
    println!("family: {} {}", a.family, spec.params);
    println!(
        "order {} size {} components {}",
        lg.graph().order(),
        lg.graph().size(),
        v.components
    );
    println!(
        "colours: {} ({} distinct)",
        fmt_set(&v.colors),
        v.color_count
    );
    if let Some(p) = &v.predicted {
        println!("predicted: {}", fmt_set(p));
    }
    println!("local antimagic: {}", v.local_antimagic);
    println!(
        "lower bound: {} ({:?})",
        v.lower_bound.value, v.lower_bound.certificate
    );
    println!("support: {:?}", v.support);
    if let Built::Matrix(mx, _) = &built {
        let rep = schemes::observe(mx);
        println!(
            "observations: {}",
            match rep.first_failure() {
                None => "all passed".to_string(),
                Some(c) => format!("failed {}: {}", c.name, c.detail),
            }
        );
    }
    println!("wrote {}", a.out.display());
    Ok(())
}

fn pretty<T: serde::Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}

fn verify_matrix(text: &str) -> Outcome {
    let mx = LabelMatrix::from_csv(text).map_err(input("matrix"))?;
    let rep = schemes::observe(&mx);
    if let Some(c) = rep.first_failure() {
        return Err(Failure::Check(format!(
            "observation {} failed: {}",
            c.name, c.detail
        )));
    }
    println!(
        "matrix {} n={} k={}: {} observation checks passed",
        mx.parity(),
        mx.n(),
        mx.k(),
        rep.checks.len()
    );
    Ok(())
}

fn verify(file: &Path) -> Outcome {
    let text = fs::read_to_string(file).map_err(input(&file.display().to_string()))?;
    if file.extension().is_some_and(|e| e == "csv") {
        return verify_matrix(&text);
    }
    let doc: LabelingDoc = serde_json::from_str(&text).map_err(input("labeling json"))?;
    let g = doc.parse_graph().map_err(input("graph"))?;
    let l = doc
        .labeling_on(g)
        .map_err(|e| Failure::Check(format!("bijection: {e}")))?;
    let rep = l.is_local_antimagic();
    if !rep.is_ok() {
        let e = &rep.violations[0];
        return Err(Failure::Check(format!(
            "local-antimagic: {} violating edges, first {e}",
            rep.violations.len()
        )));
    }
    let colors = l.induce().color_set();
    if let Some(expected) = &doc.expected_colors {
        if expected != &colors {
            return Err(Failure::Check(format!(
                "color-set: got {}, expected {}",
                fmt_set(&colors),
                fmt_set(expected)
            )));
        }
    }
    if let Some(prov) = &doc.provenance {
        let lg = prov
            .replay()
            .map_err(|e| Failure::Check(format!("provenance: replay failed: {e}")))?;
        if lg.labeling() != &l {
            return Err(Failure::Check(
                "provenance: replayed labeling differs from the file".into(),
            ));
        }
        if matches!(prov.steps.first(), Some(Step::FromMatrix)) {
            let p = &prov.params;
            let mx = schemes::build_matrix(p.parity, p.n, p.k)
                .map_err(|e| Failure::Check(format!("observations: {e}")))?;
            if let Some(c) = schemes::observe(&mx).first_failure() {
                return Err(Failure::Check(format!(
                    "observation {} failed: {}",
                    c.name, c.detail
                )));
            }
        }
    }
    println!(
        "ok: {} vertices, {} edges, colours {} ({} distinct)",
        l.graph().order(),
        l.q(),
        fmt_set(&colors),
        colors.len()
    );
    Ok(())
}

fn run_sweep(a: SweepArgs) -> Outcome {
    let families = if a.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        a.families
    };
    let mut grid = Grid::new(a.n_max, a.k_max, families);
    grid.n_min = a.n_min.max(1);
    grid.k_min = a.k_min.max(1);
    if let Some(p) = a.parity {
        grid.parities = vec![p.into()];
    }
    let rows = with_pool(a.jobs, || sweep::run(&grid))?;
    if let Some(path) = &a.csv {
        write(path, &sweep::to_csv(&rows))?;
    }
    let count = |s: Status| rows.iter().filter(|r| r.status == s).count();
    println!(
        "{} instances: {} pass, {} fail, {} unverified, {} skipped",
        rows.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Unverified),
        count(Status::Skipped)
    );
    let failed: Vec<_> = rows.iter().filter(|r| r.status == Status::Fail).collect();
    for r in failed.iter().take(20) {
        println!("FAIL {} {}: {}", r.family, r.params, r.note);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} instances failed", failed.len())))
    }
}

fn load_graph(name: &str) -> Result<Graph, Failure> {
    if let Some(g) = sweep::builtin_graph(name) {
        return Ok(g);
    }
    let text = fs::read_to_string(name).map_err(|e| {
        Failure::Input(format!(
            "{name}: not a built-in ({}) and not readable: {e}",
            sweep::BUILTIN_GRAPHS.join(", ")
        ))
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(input("graph json"))?;
    let doc: GraphDoc = if value.get("labels").is_some() {
        serde_json::from_value::<LabelingDoc>(value)
            .map_err(input("labeling json"))?
            .graph
    } else {
        serde_json::from_value(value).map_err(input("graph json"))?
    };
    doc.to_graph().map_err(input("graph"))
}

fn run_oracle(a: OracleArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let constraints = Constraints {
        colors: (!a.colors.is_empty()).then(|| a.colors.iter().copied().collect()),
        max_colors: a.max_colors,
    };
    let constrained = constraints.colors.is_some() || constraints.max_colors.is_some();
    let opts = ExactOptions {
        edge_cap: a.edge_cap,
        ..ExactOptions::default()
    };
    let (outcome, wall_time) = SearchReport::timed(|| {
        with_pool(a.jobs, || -> Result<(SearchResult, u64), Failure> {
            match a.mode {
                Mode::Exact if !constrained => {
                    let r = oracle::exact_chi_la(&g, opts).map_err(input("oracle"))?;
                    let res = match r.value {
                        ChiLa::Value(value) => SearchResult::ChiLa { value },
                        ChiLa::NoLabeling => SearchResult::NoLabeling,
                    };
                    Ok((res, r.stats.nodes_expanded))
                }
                Mode::Exact => {
                    let (l, stats) = oracle::find_labeling_exact(&g, &constraints, opts)
                        .map_err(input("oracle"))?;
                    let res = l
                        .as_ref()
                        .map_or(SearchResult::NoneExists, SearchReport::found);
                    Ok((res, stats.nodes_expanded))
                }
                Mode::Heuristic => {
                    let h = HeuristicOptions {
                        seed: a.seed,
                        restarts: a.restarts,
                        ..HeuristicOptions::default()
                    };
                    let (l, stats) = oracle::find_labeling_heuristic(&g, &constraints, h)
                        .map_err(input("oracle"))?;
                    let res = l
                        .as_ref()
                        .map_or(SearchResult::NotFound, SearchReport::found);
                    Ok((res, stats.nodes_expanded))
                }
            }
        })
        .and_then(|r| r)
    });
    let (result, nodes) = outcome?;
    let report = SearchReport {
        instance: a.graph.clone(),
        mode: match a.mode {
            Mode::Exact => "exact".into(),
            Mode::Heuristic => "heuristic".into(),
        },
        result,
        nodes_expanded: nodes,
        wall_time,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serialises")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Verify { file } => verify(&file),
        Cmd::Sweep(a) => run_sweep(a),
        Cmd::Oracle(a) => run_oracle(a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! Command-line front end for isotonian algebra computations.
//!
//! Exit codes: 0 success, 1 counterexample found, 2 usage or input error,
//! 3 guard cap or time budget hit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use isotonia::cycles::find_induced_poset_cycles;
use isotonia::hom::{enumerate_isotone, IsotoneMap};
use isotonia::ideal::{self, reduced_groebner, toric_ideal, TermOrder};
use isotonia::normality::{is_normal_with, pendant_reduce, NormalityOptions};
use isotonia::poset::{crown6, v_poset};
use isotonia::straighten::Straightener;
use isotonia::sweep::{self, Check, SweepConfig, Verdict};
use isotonia::toric::{dimension_witness, krull_dimension};
use isotonia::{Caps, Error, Limits, Poset};
use rand::SeedableRng;

#[derive(Parser)]
#[command(name = "isotonia", version, about = "Computations in isotonian algebras K[P,Q]")]
struct Cli {
    /// Print only single-line key=value records.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Wall-clock budget for the whole command (per pair for `sweep`).
    #[arg(long = "budget-ms", global = true)]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// Source poset: a poset file, or one of `chain:N`, `antichain:N`, `v`, `crown6`.
    #[arg(long = "P", value_name = "POSET")]
    p: String,
    /// Target poset, same forms as --P.
    #[arg(long = "Q", value_name = "POSET")]
    q: String,
}

#[derive(Subcommand)]
enum Command {
    /// Isotone maps P -> Q.
    Hom {
        #[command(flatten)]
        pair: Pair,
        /// Only print the number of maps.
        #[arg(long)]
        count: bool,
    },
    /// Krull dimension: exponent matrix rank against the closed formula.
    Dim {
        #[command(flatten)]
        pair: Pair,
        /// Also print the explicit independent set (connected P and Q only).
        #[arg(long)]
        witness: bool,
    },
    /// Minimal binomial generators of the defining ideal.
    Ideal {
        #[command(flatten)]
        pair: Pair,
    },
    /// Reduced Groebner basis under reverse-lex.
    Gb {
        #[command(flatten)]
        pair: Pair,
        /// Use a random variable order drawn from this seed instead of the natural one.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Degrees of the minimal generators.
    Mingens {
        #[command(flatten)]
        pair: Pair,
    },
    /// Normality via the Hilbert basis of the cone.
    Normal {
        #[command(flatten)]
        pair: Pair,
        /// Strip pendant elements of P first.
        #[arg(long)]
        reduce: bool,
        /// Accept a squarefree initial ideal as proof before computing a Hilbert basis.
        #[arg(long)]
        certificate: bool,
    },
    /// Standard expression of a product of generators, e.g. `14 25 36`.
    Straighten {
        #[command(flatten)]
        pair: Pair,
        #[arg(required = true, value_name = "MAP")]
        maps: Vec<String>,
    },
    /// Run conjecture checks over all pairs of small posets.
    Sweep {
        #[arg(long = "max-p", default_value_t = 3)]
        max_p: usize,
        #[arg(long = "max-q", default_value_t = 3)]
        max_q: usize,
        /// Comma separated subset of dimension, normality, quadratic-generation,
        /// gb-quadratic, straighten-uniqueness.
        #[arg(long, value_delimiter = ',', default_value = "dimension,normality")]
        checks: Vec<String>,
        /// JSON-lines report, resumed when it already exists.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for random term orders probed by gb-quadratic.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Induced poset cycles of Q.
    Cycles {
        #[arg(long = "Q", value_name = "POSET")]
        q: String,
        /// Minimum number of vertices.
        #[arg(long, default_value_t = 4)]
        min: usize,
    },
}

enum Failure {
    Usage(String),
    Abort(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_abort() {
            Failure::Abort(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type CmdResult = std::result::Result<ExitCode, Failure>;

fn load_poset(spec: &str) -> std::result::Result<Poset, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
        return Poset::from_text(&text).map_err(|e| Failure::Usage(format!("{spec}: {e}")));
    }
    let sized = |prefix: &str| spec.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    let builtin = if let Some(n) = sized("chain:") {
        Poset::chain(n)
    } else if let Some(n) = sized("antichain:") {
        Poset::antichain(n)
    } else if spec == "v" {
        Ok(v_poset())
    } else if spec == "crown6" {
        Ok(crown6())
    } else {
        return Err(Failure::Usage(format!("{spec}: no such file and not a built-in poset")));
    };
    builtin.map_err(|e| Failure::Usage(format!("{spec}: {e}")))
}

fn load_pair(pair: &Pair) -> std::result::Result<(Poset, Poset), Failure> {
    Ok((load_poset(&pair.p)?, load_poset(&pair.q)?))
}

fn list(items: impl IntoIterator<Item = impl ToString>) -> String {
    format!("[{}]", items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn run(cli: Cli) -> CmdResult {
    let caps = Caps::from_env()?;
    let mut limits = Limits::new(caps);
    let budget = cli.budget_ms.map(Duration::from_millis);
    if let Some(b) = budget {
        if b.is_zero() {
            return Err(Failure::Usage("--budget-ms must be positive".into()));
        }
        if !matches!(cli.command, Command::Sweep { .. }) {
            limits = limits.with_budget(b);
        }
    }
    let human = !cli.porcelain;
    match cli.command {
        Command::Hom { pair, count } => {
            let (p, q) = load_pair(&pair)?;
            let maps = enumerate_isotone(&p, &q, &limits)?;
            if human && !count {
                for m in &maps {
                    println!("{}", m.compact());
                }
            }
            println!("hom count={}", maps.len());
        }
        Command::Dim { pair, witness } => {
            let (p, q) = load_pair(&pair)?;
            let k = krull_dimension(&p, &q, &limits)?;
            println!("dim rank={} formula={} agree={}", k.rank, k.formula, k.agree);
            if witness {
                let w = dimension_witness(&p, &q)?;
                println!(
                    "witness size={} p0={} tree={}",
                    w.len(),
                    w.p0 + 1,
                    list(w.tree_edges.iter().map(|(a, b)| format!("{}<{}", a + 1, b + 1)))
                );
                if human {
                    for v in w.type_one.iter().chain(&w.type_two) {
                        println!("{}", list(&v.0));
                    }
                }
            }
            if !k.agree {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Ideal { pair } => {
            let (p, q) = load_pair(&pair)?;
            let i = toric_ideal(&p, &q, &limits)?;
            println!(
                "ideal vars={} generators={} degrees={}",
                i.nvars(),
                i.generators.len(),
                list(ideal::minimal_generator_degrees(&i))
            );
            if human {
                for g in &i.generators {
                    println!("{}", i.format(g));
                }
            }
        }
        Command::Gb { pair, seed } => {
            let (p, q) = load_pair(&pair)?;
            let i = toric_ideal(&p, &q, &limits)?;
            let order = match seed {
                Some(s) => TermOrder::shuffled(i.nvars(), &mut rand::rngs::StdRng::seed_from_u64(s)),
                None => TermOrder::natural(i.nvars()),
            };
            let gb = reduced_groebner(&i, &order, &limits)?;
            let a = ideal::analyze_basis(&gb);
            println!("gb size={} max_degree={} squarefree={}", gb.len(), a.max_gb_degree, a.initial_squarefree);
            if human {
                for g in &gb {
                    println!("{}", i.format(g));
                }
            }
        }
        Command::Mingens { pair } => {
            let (p, q) = load_pair(&pair)?;
            let i = toric_ideal(&p, &q, &limits)?;
            println!("mingens degrees={}", list(ideal::minimal_generator_degrees(&i)));
        }
        Command::Normal { pair, reduce, certificate } => {
            let (p, q) = load_pair(&pair)?;
            let p = if reduce { pendant_reduce(&p) } else { p };
            let r = is_normal_with(&p, &q, NormalityOptions { try_certificate: certificate }, &limits)?;
            let hb = r.hilbert_count.map_or("-".to_string(), |c| c.to_string());
            println!("normal result={} hb={} via={}", r.normal, hb, r.via);
            if human {
                for e in &r.failing_elements {
                    println!("not in semigroup: {}", e.x_monomial(q.len()));
                }
            }
            if !r.normal {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Straighten { pair, maps } => {
            let (p, q) = load_pair(&pair)?;
            let st = Straightener::new(&p, &q, &limits)?;
            let factors: Vec<IsotoneMap> =
                maps.iter().map(|m| IsotoneMap::parse(m)).collect::<isotonia::Result<_>>()?;
            let e = st.expression(&factors)?;
            let out = st.straighten(&e)?;
            let standard = st.standard_expressions_of_fiber(&e.product, factors.len(), &limits)?;
            println!(
                "straighten result={} changed={} standard_in_fiber={} product={}",
                out.compact(),
                out != e,
                standard.len(),
                e.product.x_monomial(q.len())
            );
            if human {
                for s in &standard {
                    println!("standard: {}", s.compact());
                }
            }
        }
        Command::Sweep { max_p, max_q, checks, out, seed } => {
            let checks: Vec<Check> = checks.iter().map(|c| c.trim().parse()).collect::<isotonia::Result<_>>()?;
            let mut cfg = SweepConfig::new(max_p, max_q, checks);
            cfg.caps = caps;
            cfg.output = out;
            cfg.seed = seed;
            if let Some(b) = budget {
                cfg.budget = b;
            }
            let summary = sweep::sweep(&cfg, |f| {
                if f.verdict != Verdict::Confirmed || !human {
                    println!("{}", f.porcelain());
                }
            })?;
            if human {
                for ((check, verdict), n) in summary.counts() {
                    println!("{check}: {verdict} {n}");
                }
                if summary.resumed > 0 {
                    println!("resumed past {} recorded findings", summary.resumed);
                }
            }
            println!(
                "sweep findings={} counterexamples={} skipped={}",
                summary.findings.len(),
                summary.counterexamples().count(),
                summary.aborted()
            );
            if summary.counterexamples().next().is_some() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Cycles { q, min } => {
            let q = load_poset(&q)?;
            let cycles = find_induced_poset_cycles(&q, min);
            println!("cycles count={}", cycles.len());
            if human {
                for c in &cycles {
                    let names = |v: &[usize]| list(v.iter().map(|&i| q.name(i).to_string()));
                    println!("vertices={} a={} b={}", c.vertex_count(), names(&c.a), names(&c.b));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Abort(msg)) => {
            eprintln!("aborted: {msg}");
            ExitCode::from(3)
        }
    }
}

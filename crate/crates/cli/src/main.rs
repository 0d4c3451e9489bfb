//! `zdg-forge`: builds the A/B algebras, compares their zero-divisor graphs,
//! certifies non-isomorphism, checks identities and runs the small-ring census.

mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zdg_core::catalog::{self, oracle};
use zdg_core::constructions::{construct_with, Symmetry, Variant, DEFAULT_GENERATORS};
use zdg_core::identities::{holds, Identity, Mode};
use zdg_core::verify::{self, Check};
use zdg_core::zdg::{compressed_graph, explicit_graph, EXPLICIT_CAP};
use zdg_core::{AlgebraJson, FiniteRing, RingTable, ScAlgebra};

use report::Recorder;

#[derive(Parser)]
#[command(name = "zdg-forge", version, about = "Exact computations with zero-divisor graphs of small nilpotent rings")]
struct Cli {
    /// Worker threads (defaults to one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every randomized step; recorded in the report.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Write the JSON run report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build A1, B1 (alternating) or A2, B2 (commutative) over Z_p and check
    /// the dimension of R².
    Construct {
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        p: u32,
        /// Number of generators.
        #[arg(long, default_value_t = DEFAULT_GENERATORS)]
        n: usize,
        /// Write the structure constants as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the basis of R², the product criterion for elements outside R²
    /// and ann(a) = R² in the commutative family, exhaustively.
    VerifyLemmas {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        /// M1 is the alternating family, M2 the commutative one (odd p only).
        #[arg(long, value_enum, default_value_t = Variety::All)]
        variety: Variety,
    },
    /// Compare the zero-divisor graphs of two constructions: isomorphic within
    /// one family, different across families.
    Compare {
        #[command(flatten)]
        pair: PairArgs,
        /// Also check expand(compressed) against the explicit graph with this
        /// many generators.
        #[arg(long)]
        cross_validate: Option<usize>,
        /// Expected verdict; defaults to "isomorphic" within one family.
        #[arg(long)]
        expect_isomorphic: Option<bool>,
    },
    /// Certify that the two algebras of a pair are not isomorphic, by the
    /// ranks of their relation forms plus a seeded sampling replay.
    CertifyNoniso {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Check a polynomial identity on a finite ring.
    Identity {
        /// A ring JSON file (Cayley table or structure constants) or a
        /// builtin: Zn, N0_p, and sums like Z2+Z3.
        #[arg(long)]
        ring: String,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Substitutions in sampled mode.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Expect::Holds)]
        expect: Expect,
    },
    /// Enumerate rings with xyz = 0, x² = 0, 2x = 0 up to a power-of-two
    /// order and check that the zero-divisor graph determines the ring.
    Census {
        #[arg(long, default_value_t = 16)]
        max_order: u64,
        /// Compare class counts against brute force (orders up to 16).
        #[arg(long)]
        oracle: bool,
        /// Directory for catalog.jsonl and determinacy.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Export a zero-divisor graph as an edge list or a blow-up JSON.
    ExportGraph {
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, required_unless_present = "ring")]
        p: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_GENERATORS)]
        n: usize,
        /// Ring instead of a construction (as for `identity`); edge lists only.
        #[arg(long, conflicts_with = "variant")]
        ring: Option<String>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Two variants back to back, e.g. A1B1, A2B2, A1A2.
    #[arg(long, value_parser = parse_pair)]
    pair: (Variant, Variant),
    #[arg(long)]
    p: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variety {
    M1,
    M2,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Multilinear,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Holds,
    Fails,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Blowup,
}

fn parse_pair(s: &str) -> Result<(Variant, Variant), String> {
    if s.len() != 4 || !s.is_ascii() {
        return Err(format!("expected two variants such as A1B1, got `{s}`"));
    }
    let (a, b) = s.split_at(2);
    Ok((a.parse().map_err(|e| format!("{e}"))?, b.parse().map_err(|e| format!("{e}"))?))
}

/// A ring loaded for `identity` and `export-graph`.
enum LoadedRing {
    Table(RingTable),
    Algebra(ScAlgebra),
}

impl LoadedRing {
    fn as_ring(&self) -> &(dyn FiniteRing + Sync) {
        match self {
            LoadedRing::Table(t) => t,
            LoadedRing::Algebra(a) => a,
        }
    }
}

fn builtin_ring(spec: &str) -> anyhow::Result<RingTable> {
    let mut sum: Option<RingTable> = None;
    for part in spec.split('+').map(str::trim) {
        let ring = if let Some(n) = part.strip_prefix("N0_") {
            RingTable::zero_product(n.parse().with_context(|| format!("bad order in `{part}`"))?)?
        } else if let Some(n) = part.strip_prefix('Z') {
            RingTable::cyclic(n.parse().with_context(|| format!("bad modulus in `{part}`"))?)?
        } else {
            bail!("unknown ring `{part}`; expected Zn, N0_p or a JSON file");
        };
        sum = Some(match sum {
            None => ring,
            Some(acc) => RingTable::direct_sum(&acc, &ring)?,
        });
    }
    sum.context("empty ring description")
}

fn load_ring(spec: &str) -> anyhow::Result<LoadedRing> {
    if !Path::new(spec).exists() {
        return Ok(LoadedRing::Table(builtin_ring(spec)?));
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    if let Ok(j) = serde_json::from_str(&text) {
        return Ok(LoadedRing::Table(RingTable::from_json(j)?));
    }
    let j: AlgebraJson = serde_json::from_str(&text).with_context(|| format!("{spec} is neither a ring table nor an algebra"))?;
    Ok(LoadedRing::Algebra(ScAlgebra::from_json(&j)?))
}

fn write_output(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn families(v: Variety, p: u32) -> Vec<Symmetry> {
    match v {
        Variety::M1 => vec![Symmetry::Alternating],
        Variety::M2 => vec![Symmetry::Commutative],
        Variety::All if p == 2 => vec![Symmetry::Alternating],
        Variety::All => vec![Symmetry::Alternating, Symmetry::Commutative],
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let seed = cli.seed;
    let report_path = cli.report.clone();
    let mut report_to_stdout = true;
    let rec = match cli.command {
        Command::Construct { variant, p, n, emit } => {
            let mut rec = Recorder::new("construct", json!({ "variant": variant.to_string(), "p": p, "n": n }));
            let pres = construct_with(variant, p, n)?;
            if n == DEFAULT_GENERATORS {
                rec.push(verify::square_ideal_check(variant, p)?);
                rec.push(verify::order_check(variant, p)?);
            }
            if let Some(path) = emit {
                let text = serde_json::to_string(&pres.algebra().to_json())?;
                write_output(Some(&path), &(text + "\n"))?;
            }
            rec
        }
        Command::VerifyLemmas { p, variety } => {
            let mut rec = Recorder::new("verify-lemmas", json!({ "p": p, "variety": value_name(variety) }));
            for &q in &p {
                let fams = families(variety, q);
                for c in verify::lemma_suite(q, &fams)? {
                    rec.push(c);
                }
                for &s in &fams {
                    let n = if s == Symmetry::Alternating { 4 } else { 3 };
                    rec.push(verify::variety_identity_check(s, q, n)?);
                }
            }
            rec
        }
        Command::Compare { pair: PairArgs { pair: (a, b), p }, cross_validate, expect_isomorphic } => {
            let mut rec = Recorder::new(
                "compare",
                json!({ "pair": format!("{a}{b}"), "p": p, "cross_validate": cross_validate, "expect_isomorphic": expect_isomorphic }),
            );
            let mut c = verify::graph_comparison(a, b, p)?;
            if let Some(e) = expect_isomorphic {
                c.passed = c.payload["isomorphic"] == e;
                c.payload["expected"] = e.into();
            }
            rec.push(c);
            if let Some(n) = cross_validate {
                for v in if a == b { vec![a] } else { vec![a, b] } {
                    // B1 and B2 need all six generators for their relation
                    if construct_with(v, p, n).is_err() {
                        eprintln!("skip cross-validation of {v}: not defined on {n} generators");
                        continue;
                    }
                    rec.push(verify::cross_validation(v, p, n)?);
                }
            }
            rec
        }
        Command::CertifyNoniso { pair: PairArgs { pair: (a, b), p }, samples } => {
            let mut rec =
                Recorder::new("certify-noniso", json!({ "pair": format!("{a}{b}"), "p": p, "samples": samples, "seed": seed }));
            rec.push(verify::certificate_check(a, b, p, samples, seed)?);
            rec
        }
        Command::Identity { ring, expr, mode, samples, expect } => {
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Multilinear => Mode::Multilinear,
                ModeArg::Sampled => Mode::Sampled { samples, seed },
            };
            let mut rec = Recorder::new(
                "identity",
                json!({ "ring": ring, "expr": expr, "mode": format!("{mode:?}"), "expect": value_name(expect) }),
            );
            let loaded = load_ring(&ring)?;
            let f = Identity::parse(&expr)?;
            let verdict = holds(loaded.as_ring(), &f, mode)?;
            rec.push(Check::new(
                format!("identity/{ring}"),
                format!("{f} = 0 on {ring}"),
                verdict.holds == (expect == Expect::Holds),
                json!({ "identity": f.to_string(), "verdict": verdict }),
            ));
            rec
        }
        Command::Census { max_order, oracle, out_dir } => census(max_order, oracle, out_dir.as_deref())?,
        Command::ExportGraph { variant, p, n, ring, format, out } => {
            let mut rec = Recorder::new(
                "export-graph",
                json!({ "variant": variant.map(|v| v.to_string()), "p": p, "n": n, "ring": ring }),
            );
            let text = match (variant, ring, format) {
                (Some(v), None, GraphFormat::Blowup) => {
                    let b = compressed_graph(&construct_with(v, p.context("--p is required")?, n)?)?;
                    serde_json::to_string(&b.to_json())? + "\n"
                }
                (Some(v), None, GraphFormat::Edges) => {
                    let pres = construct_with(v, p.context("--p is required")?, n)?;
                    explicit_graph(pres.algebra(), EXPLICIT_CAP)?.to_edge_list()
                }
                (None, Some(r), GraphFormat::Edges) => explicit_graph(load_ring(&r)?.as_ring(), EXPLICIT_CAP)?.to_edge_list(),
                (None, Some(_), GraphFormat::Blowup) => bail!("blow-up export needs --variant"),
                _ => bail!("give exactly one of --variant or --ring"),
            };
            let mut payload = json!({ "bytes": text.len(), "format": value_name(format) });
            if let GraphFormat::Edges = format {
                let header = text.lines().next().unwrap_or_default();
                if let Some((v, e)) = header.split_once(' ') {
                    payload["vertices"] = v.parse::<u64>()?.into();
                    payload["edges"] = e.parse::<u64>()?.into();
                }
            }
            rec.push(Check::new("export", "graph written", true, payload));
            // stdout carries the graph, so the report only goes to a file
            report_to_stdout = out.is_some();
            write_output(out.as_deref(), &text)?;
            rec
        }
    };
    let report = rec.finish();
    if report_path.is_some() || report_to_stdout {
        report::emit(&report, report_path.as_deref())?;
    }
    Ok(report.passed)
}

fn census(max_order: u64, with_oracle: bool, out_dir: Option<&Path>) -> anyhow::Result<Recorder> {
    let mut rec = Recorder::new("census", json!({ "max_order": max_order, "oracle": with_oracle }));
    let entries = catalog::enumerate_variety_rings(max_order)?;
    let counts = catalog::class_counts(&entries);
    let mut reports = Vec::new();
    for (&order, &classes) in &counts {
        log::info!("order {order}: {classes} classes");
        let r = catalog::determinacy_report(&entries, order)?;
        rec.push(Check::new(
            format!("determinacy/order={order}"),
            "rings in the variety with isomorphic zero-divisor graphs are isomorphic",
            r.violations.is_empty(),
            serde_json::to_value(&r)?,
        ));
        reports.push(r);
    }
    if with_oracle {
        for d in 1..=oracle::ORACLE_MAX_DIM {
            let order = 1u64 << d;
            if order > max_order {
                break;
            }
            let expected = oracle::count_classes(d)?;
            let got = counts.get(&order).copied().unwrap_or(0);
            rec.push(Check::new(
                format!("oracle/order={order}"),
                "enumerated class count equals the brute-force count",
                got == expected,
                json!({ "enumerated": got, "oracle": expected }),
            ));
        }
    }
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        let mut lines = String::new();
        for e in &entries {
            lines += &serde_json::to_string(e)?;
            lines.push('\n');
        }
        fs::write(dir.join("catalog.jsonl"), lines)?;
        let counts: BTreeMap<String, usize> = counts.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let summary = json!({ "class_counts": counts, "counts_source": "computed", "reports": reports });
        fs::write(dir.join("determinacy.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(rec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

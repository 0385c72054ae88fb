//! `cospec`: build and certify connected cospectral graph families.
//!
//! Exit status: 0 on success (or a valid certificate / isomorphic pair),
//! 1 when a certificate is invalid or graphs are non-isomorphic, 2 on usage
//! or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use cospec_core::construct::{check_conditions, find_coprime_pair, ConstructionResult};
use cospec_core::corpus::{
    family_file, find_seed_families, generate_small_corpus, parse_graph_lines, Corpus, SeedOptions,
};
use cospec_core::{
    build_power_family, build_product_family, build_relaxed_family, cartesian_product, char_poly, count_new_triplets,
    emit_graph6, fallback_family, parse_graph6, prime_factorize, verify_cross_spectra, verify_family, CospectralFamily,
    Graph, SpectrumKind,
};

#[derive(Parser)]
#[command(name = "cospec", version, about = "Connected cospectral graph families from Cartesian products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph6 of the Cartesian product of two graphs.
    Product { g: String, h: String },
    /// Print the Cartesian prime factors of a connected graph, one per line.
    Factorize { g: String },
    /// Print characteristic polynomial coefficients, ascending degree.
    Charpoly {
        g: String,
        #[arg(long)]
        kind: SpectrumKind,
    },
    /// Exit 0 if the two graphs are isomorphic, 1 otherwise.
    Iso { g: String, h: String },
    /// Certify a family file.
    Verify {
        family: PathBuf,
        #[arg(long)]
        kind: SpectrumKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report which product conditions hold for two family files.
    CheckConditions {
        fam_g: PathBuf,
        fam_h: PathBuf,
        #[arg(long)]
        kind: SpectrumKind,
    },
    /// Build a family from seed family files.
    #[command(subcommand)]
    Construct(Construction),
    /// Evaluate the closed-form triplet count for family sizes p and q.
    CountTriplets {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        q: u64,
    },
    /// Write all connected graphs on at most N vertices, one per isomorphism class.
    GenCorpus {
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Group a corpus by spectrum and emit the cospectral families found.
    FindSeeds {
        corpus: PathBuf,
        #[arg(long)]
        kind: SpectrumKind,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        /// Keep a pairwise coprime subset of each family.
        #[arg(long)]
        coprime: bool,
        /// Keep only Cartesian prime members.
        #[arg(long)]
        prime: bool,
        /// Directory for one family file per family; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    fam_g: PathBuf,
    fam_h: PathBuf,
    #[arg(long)]
    kind: SpectrumKind,
    /// Directory for family.g6 and certificate.json; the certificate goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construction {
    /// All p·q products (needs condition 1, 2 or 3).
    Theorem1(PairArgs),
    /// The p+q-1 cross through a coprime pair (0-based --i/--j, auto-selected if omitted).
    Theorem2 {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
    /// The larger of the first row and first column, max(p, q) graphs.
    Fallback(PairArgs),
    /// C(k+p-1, k) products of a pairwise coprime seed family.
    Theorem3 {
        fam_u: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kind: SpectrumKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn graph_arg(s: &str) -> Result<Graph> {
    parse_graph6(s.trim().as_bytes()).with_context(|| format!("invalid graph6 `{s}`"))
}

fn read_graphs(path: &Path) -> Result<Vec<Graph>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let entries = parse_graph_lines(&text).with_context(|| format!("parsing {}", path.display()))?;
    if entries.is_empty() {
        bail!("{} contains no graphs", path.display());
    }
    Ok(entries.into_iter().map(|e| e.graph).collect())
}

fn read_family(path: &Path, kind: SpectrumKind) -> Result<CospectralFamily> {
    CospectralFamily::verify(read_graphs(path)?, kind).map_err(|e| match e {
        cospec_core::Error::VerificationFailed(cert) => {
            let failed: Vec<String> = cert
                .checks
                .iter()
                .filter(|(_, c)| !c.passed())
                .map(|(name, c)| format!("{name}: {}", c.witness.as_deref().unwrap_or("failed")))
                .collect();
            anyhow::anyhow!("{} is not a cospectral family ({})", path.display(), failed.join("; "))
        }
        other => other.into(),
    })
}

fn write_or_print(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, contents).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn emit_construction(result: ConstructionResult, out: Option<&Path>) -> Result<ExitCode> {
    let json = result.certificate.to_json() + "\n";
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            fs::write(dir.join("family.g6"), family_file(&result.family))?;
            fs::write(dir.join("certificate.json"), &json)?;
            println!(
                "{} graphs on {} vertices, certificate {}: {}",
                result.family.len(),
                result.family.order(),
                if result.certificate.valid { "valid" } else { "invalid" },
                dir.display()
            );
        }
        None => print!("{json}"),
    }
    Ok(if result.certificate.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Product { g, h } => {
            println!("{}", emit_graph6(&cartesian_product(&graph_arg(&g)?, &graph_arg(&h)?))?);
        }
        Command::Factorize { g } => {
            for f in prime_factorize(&graph_arg(&g)?)?.factors {
                println!("{} {}", f.canon_g6, f.multiplicity);
            }
        }
        Command::Charpoly { g, kind } => {
            println!("{}", char_poly(&graph_arg(&g)?, kind).to_decimal_strings().join(" "));
        }
        Command::Iso { g, h } => {
            let (g, h) = (graph_arg(&g)?, graph_arg(&h)?);
            if cospec_core::are_isomorphic(&g, &h) {
                println!("isomorphic");
            } else {
                println!("non-isomorphic");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verify { family, kind, out } => {
            let cert = verify_family(&read_graphs(&family)?, kind)?;
            write_or_print(out.as_deref(), &(cert.to_json() + "\n"))?;
            if !cert.valid {
                return Ok(ExitCode::from(1));
            }
        }
        Command::CheckConditions { fam_g, fam_h, kind } => {
            let (g, h) = (read_family(&fam_g, kind)?, read_family(&fam_h, kind)?);
            let report = check_conditions(&g, &h)?;
            let cross = verify_cross_spectra(&g, &h)?;
            let coprime = find_coprime_pair(&g, &h)?;
            let value = serde_json::json!({
                "conditions": report.to_map(),
                "shared_factors": report.shared,
                "cross_spectra": { "distinct": cross.distinct, "witness": cross.witness },
                "first_coprime_pair": coprime,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Command::Construct(c) => return construct(c),
        Command::CountTriplets { p, q } => println!("{}", count_new_triplets(p, q)),
        Command::GenCorpus { nmax, out } => {
            let corpus = generate_small_corpus(nmax)?;
            eprintln!("{} connected graphs on 1..={nmax} vertices", corpus.stats.total);
            write_or_print(out.as_deref(), &corpus.to_graph6_lines())?;
        }
        Command::FindSeeds { corpus, kind, min_size, coprime, prime, out } => {
            let text = fs::read_to_string(&corpus).with_context(|| format!("reading {}", corpus.display()))?;
            let corpus = Corpus::parse(&text)?;
            let opts = SeedOptions { min_size, require_coprime: coprime, require_prime: prime };
            let families = find_seed_families(&corpus, kind, opts)?;
            eprintln!("{} families", families.len());
            if let Some(dir) = &out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            for (idx, fam) in families.iter().enumerate() {
                let text = family_file(fam);
                match &out {
                    Some(dir) => fs::write(dir.join(format!("seed_{:02}_{idx:04}.g6", fam.order())), text)?,
                    None => print!("{text}"),
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn construct(c: Construction) -> Result<ExitCode> {
    let (result, out) = match c {
        Construction::Theorem1(a) => {
            let (g, h) = (read_family(&a.fam_g, a.kind)?, read_family(&a.fam_h, a.kind)?);
            (build_product_family(&g, &h)?, a.out)
        }
        Construction::Theorem2 { pair: a, i, j } => {
            let (g, h) = (read_family(&a.fam_g, a.kind)?, read_family(&a.fam_h, a.kind)?);
            let (i, j) = match (i, j) {
                (Some(i), Some(j)) => (i, j),
                (None, None) => find_coprime_pair(&g, &h)?.context("no coprime pair (G_i, H_j) exists")?,
                _ => bail!("--i and --j must be given together"),
            };
            (build_relaxed_family(&g, &h, i, j)?, a.out)
        }
        Construction::Fallback(a) => {
            let (g, h) = (read_family(&a.fam_g, a.kind)?, read_family(&a.fam_h, a.kind)?);
            (fallback_family(&g, &h)?, a.out)
        }
        Construction::Theorem3 { fam_u, k, kind, out } => {
            let u = read_family(&fam_u, kind)?;
            (build_power_family(&u, k)?, out)
        }
    };
    emit_construction(result, out.as_deref())
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("COSPEC_THREADS") {
        let n: usize = v.parse().with_context(|| format!("COSPEC_THREADS={v} is not a number"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

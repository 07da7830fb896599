//! Command-line front end: parse a parity-check matrix, then compute graph
//! statistics, the edge zeta function, cycle inventories, fundamental-cone
//! queries, cover samples or the full pseudo-codeword equivalence check.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a mismatch, 2 on input
//! errors. All seeded commands are bit-reproducible for a fixed
//! configuration.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use cyclezeta::codegraph::{
    build_normal_graph, graph_stats, is_cycle_code, parse_parity_check, MatrixFormat, NormalGraph,
    ParityCheckMatrix,
};
use cyclezeta::cone::{check_newton_equivalence, cone_system, integer_points, IntegerConePoint};
use cyclezeta::covers::{
    build_cover, enumerate_codewords, pseudo_codeword, random_cover_spec, sample_codewords,
    CoverSpec,
};
use cyclezeta::cycles::{enumerate_btt_classes, enumerate_simple_cycles, realizable_usage_vectors};
use cyclezeta::polyring::{SparsePolynomial, TermJson};
use cyclezeta::zeta::{
    directed_edge_matrix, support_exponents, zeta_inverse, zeta_series, DirectedEdgeSet,
};

#[derive(Parser)]
#[command(
    name = "cyclezeta",
    about = "Edge zeta functions, covers and pseudo-codewords of binary cycle codes",
    version
)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the parity-check matrix file.
    #[arg(long, short = 'i', global = true, default_value = "-")]
    input: String,

    /// Input format.
    #[arg(long, global = true, value_enum, default_value_t = InputFormat::Dense)]
    format: InputFormat,

    /// Output format (env: CYCLEZETA_OUTPUT).
    #[arg(long, global = true, value_enum, env = "CYCLEZETA_OUTPUT",
          default_value_t = OutputFormat::Text)]
    output: OutputFormat,

    /// Accept parity-check matrices with repeated weight-2 columns
    /// (parallel edges in the normal graph).
    #[arg(long, global = true)]
    allow_multigraph: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Dense,
    Alist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Graph statistics of the input code.
    Stats,
    /// Zeta inverse polynomial, truncated Taylor series and its support.
    Zeta {
        /// Total-degree bound for the series; defaults to twice the number
        /// of bits.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Simple cycles and rotation classes of primitive backtrackless
    /// tailless cycles.
    Cycles {
        /// Length bound for the class enumeration; defaults to twice the
        /// number of bits.
        #[arg(long)]
        max_length: Option<usize>,
    },
    /// Fundamental cone queries.
    Cone {
        /// Comma-separated rational vector to test for membership,
        /// e.g. 2,2,2,0 or 1/2,1/2,1/2,1,1/2,1/2,1/2.
        #[arg(long, value_name = "W1,W2,...", conflicts_with = "enumerate")]
        check: Option<String>,

        /// Enumerate integer points of total degree up to this bound.
        #[arg(long, value_name = "DEGREE")]
        enumerate: Option<u32>,
    },
    /// Sample covers (or build one from a spec file) and verify that every
    /// pseudo-codeword lies in the fundamental cone.
    Covers {
        /// Cover degree M for random sampling.
        #[arg(long, short = 'm', default_value_t = 2)]
        cover_degree: usize,

        /// Number of random covers to sample.
        #[arg(long, default_value_t = 1)]
        samples: u64,

        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// JSON cover-spec file; overrides random sampling.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Check that zeta support, cone lattice points and cycle-realizable
    /// vectors agree up to the degree bound. Exits 1 on mismatch.
    Verify {
        /// Total-degree bound; defaults to twice the number of bits.
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let code = match run(&cli, &mut out) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    };
    // tolerate a closed pipe (e.g. piping into `head`)
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(out.as_bytes());
    code
}

fn run(cli: &Cli, out: &mut String) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let text = if cli.common.input == "-" {
        use std::io::Read as _;
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(&cli.common.input)?
    };
    let format = match cli.common.format {
        InputFormat::Dense => MatrixFormat::Dense,
        InputFormat::Alist => MatrixFormat::Alist,
    };
    let h = parse_parity_check(&text, format)?;
    let json = cli.common.output == OutputFormat::Json;

    match &cli.command {
        Command::Stats => cmd_stats(&h, cli, json, out),
        Command::Zeta { max_degree } => cmd_zeta(&h, cli, *max_degree, json, out),
        Command::Cycles { max_length } => cmd_cycles(&h, cli, *max_length, json, out),
        Command::Cone { check, enumerate } => cmd_cone(&h, check.as_deref(), *enumerate, json, out),
        Command::Covers {
            cover_degree,
            samples,
            seed,
            spec,
        } => cmd_covers(
            &h,
            *cover_degree,
            *samples,
            *seed,
            spec.as_deref(),
            json,
            out,
        ),
        Command::Verify { max_degree } => cmd_verify(&h, cli, *max_degree, json, out),
    }
}

/// Builds the normal graph, enforcing the multigraph flag and warning when
/// the identities are exercised outside their usual simple-graph setting.
fn normal_graph(h: &ParityCheckMatrix, cli: &Cli) -> cyclezeta::Result<NormalGraph> {
    let n = build_normal_graph(h, cli.common.allow_multigraph)?;
    if n.has_parallel_edges() {
        eprintln!(
            "note: the normal graph has parallel edges; zeta and cone identities are \
             reported for a multigraph"
        );
    }
    Ok(n)
}

fn default_degree(h: &ParityCheckMatrix) -> u32 {
    2 * h.num_cols() as u32
}

fn print_json<T: Serialize>(
    value: &T,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(value)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(
    h: &ParityCheckMatrix,
    cli: &Cli,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    #[derive(Serialize)]
    struct StatsReport {
        bits: usize,
        checks: usize,
        rank: usize,
        dimension: usize,
        cycle_code: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        girth: Option<GraphPart>,
    }
    #[derive(Serialize)]
    struct GraphPart {
        girth: Option<usize>,
        cycle_rank: usize,
        components: usize,
        euler_characteristic: i64,
        parallel_edges: bool,
    }

    let cycle = is_cycle_code(h);
    let graph = if cycle {
        let n = normal_graph(h, cli)?;
        let stats = graph_stats(&n);
        Some(GraphPart {
            girth: stats.girth,
            cycle_rank: stats.cycle_rank,
            components: stats.num_components,
            euler_characteristic: stats.euler_characteristic,
            parallel_edges: n.has_parallel_edges(),
        })
    } else {
        None
    };
    let report = StatsReport {
        bits: h.num_cols(),
        checks: h.num_rows(),
        rank: h.rank(),
        dimension: h.num_cols() - h.rank(),
        cycle_code: cycle,
        girth: graph,
    };
    if json {
        return print_json(&report, out);
    }
    let _ = writeln!(out, "bits: {}", report.bits);
    let _ = writeln!(out, "checks: {}", report.checks);
    let _ = writeln!(out, "rank: {}", report.rank);
    let _ = writeln!(out, "dimension: {}", report.dimension);
    let _ = writeln!(
        out,
        "cycle code: {}",
        if report.cycle_code { "yes" } else { "no" }
    );
    if let Some(g) = report.girth {
        match g.girth {
            Some(girth) => {
                let _ = writeln!(out, "girth: {girth}");
            }
            None => {
                let _ = writeln!(out, "girth: infinity");
            }
        }
        let _ = writeln!(out, "cycle rank: {}", g.cycle_rank);
        let _ = writeln!(out, "components: {}", g.components);
        let _ = writeln!(out, "euler characteristic: {}", g.euler_characteristic);
        if g.parallel_edges {
            let _ = writeln!(out, "parallel edges: yes");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn poly_terms_json(p: &SparsePolynomial) -> Vec<TermJson> {
    p.terms()
        .map(|(e, c)| TermJson {
            exp: e.0.clone(),
            coeff: c.to_string(),
        })
        .collect()
}

fn exponent_list(p: &[u32]) -> String {
    let parts: Vec<String> = p.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_zeta(
    h: &ParityCheckMatrix,
    cli: &Cli,
    max_degree: Option<u32>,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let n = normal_graph(h, cli)?;
    let bound = max_degree.unwrap_or_else(|| default_degree(h));
    let z = zeta_inverse(&n);
    let series = zeta_series(&z, bound)?;
    let support = support_exponents(&series);

    #[derive(Serialize)]
    struct ZetaReport {
        n: usize,
        zeta_inverse: Vec<TermJson>,
        series: SeriesPart,
        support: Vec<Vec<u32>>,
    }
    #[derive(Serialize)]
    struct SeriesPart {
        max_degree: u32,
        terms: Vec<TermJson>,
    }
    let report = ZetaReport {
        n: h.num_cols(),
        zeta_inverse: poly_terms_json(z.poly()),
        series: SeriesPart {
            max_degree: bound,
            terms: poly_terms_json(series.series().as_poly()),
        },
        support: support.iter().map(|e| e.0.clone()).collect(),
    };
    if json {
        return print_json(&report, out);
    }
    let _ = writeln!(out, "zeta_inverse: {}", z.poly());
    let _ = writeln!(
        out,
        "series (total degree <= {bound}): {}",
        series.series().as_poly()
    );
    let _ = writeln!(out, "support ({} exponent vectors):", report.support.len());
    for p in &report.support {
        let _ = writeln!(out, "  {}", exponent_list(p));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_cycles(
    h: &ParityCheckMatrix,
    cli: &Cli,
    max_length: Option<usize>,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let n = normal_graph(h, cli)?;
    let bound = max_length.unwrap_or(2 * n.num_edges());
    let simple = enumerate_simple_cycles(&n);
    let d = DirectedEdgeSet::canonical(&n);
    let classes = enumerate_btt_classes(&d, bound);
    let m = directed_edge_matrix(&d);

    #[derive(Serialize)]
    struct CyclesReport<'a> {
        simple_cycles: Vec<Vec<usize>>,
        max_length: usize,
        classes: &'a [cyclezeta::cycles::CycleClass],
        directed_edge_matrix: Vec<Vec<u8>>,
    }
    let report = CyclesReport {
        simple_cycles: simple
            .iter()
            .map(|c| c.iter().map(|&e| e + 1).collect())
            .collect(),
        max_length: bound,
        classes: &classes,
        directed_edge_matrix: m.rows().to_vec(),
    };
    if json {
        return print_json(&report, out);
    }
    let _ = writeln!(out, "simple cycles ({}):", report.simple_cycles.len());
    for c in &report.simple_cycles {
        let edges: Vec<String> = c.iter().map(|e| format!("e{e}")).collect();
        let _ = writeln!(out, "  {{{}}}", edges.join(","));
    }
    let _ = writeln!(
        out,
        "primitive backtrackless tailless classes up to length {bound}: {}",
        classes.len()
    );
    for class in &classes {
        let rep: Vec<String> = class.rep.iter().map(|&k| format!("f{}", k + 1)).collect();
        let _ = writeln!(
            out,
            "  length {}: ({}) monomial {}",
            class.length,
            rep.join(","),
            exponent_list(&class.monomial.0)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_rational_vector(text: &str) -> Result<Vec<BigRational>, String> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (num, den) = match tok.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (tok, "1"),
            };
            let num: BigInt = num.parse().map_err(|_| format!("bad number {tok:?}"))?;
            let den: BigInt = den.parse().map_err(|_| format!("bad number {tok:?}"))?;
            if den == BigInt::from(0) {
                return Err(format!("zero denominator in {tok:?}"));
            }
            Ok(BigRational::new(num, den))
        })
        .collect()
}

fn cmd_cone(
    h: &ParityCheckMatrix,
    check: Option<&str>,
    enumerate: Option<u32>,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let system = cone_system(h);
    if let Some(vector) = check {
        let w = parse_rational_vector(vector)?;
        let violation = system.first_violation(&w)?;

        #[derive(Serialize)]
        struct CheckReport {
            vector: Vec<String>,
            in_cone: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            violated: Option<String>,
        }
        let report = CheckReport {
            vector: w.iter().map(ToString::to_string).collect(),
            in_cone: violation.is_none(),
            violated: violation.map(ToString::to_string),
        };
        if json {
            return print_json(&report, out);
        }
        match &report.violated {
            None => {
                let _ = writeln!(out, "in cone: yes");
            }
            Some(witness) => {
                let _ = writeln!(out, "in cone: no; violated: {witness}");
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(bound) = enumerate {
        let points = integer_points(&system, h, bound)?;
        let pseudo: Vec<&IntegerConePoint> =
            points.iter().filter(|p| p.is_pseudo_codeword()).collect();

        #[derive(Serialize)]
        struct EnumerateReport {
            degree_bound: u32,
            total_points: usize,
            pseudo_codeword_count: usize,
            pseudo_codewords: Vec<Vec<u32>>,
        }
        let report = EnumerateReport {
            degree_bound: bound,
            total_points: points.len(),
            pseudo_codeword_count: pseudo.len(),
            pseudo_codewords: pseudo.iter().map(|p| p.point.clone()).collect(),
        };
        if json {
            return print_json(&report, out);
        }
        let _ = writeln!(
            out,
            "pseudo-codeword lattice points (total degree <= {bound}): {}",
            report.pseudo_codeword_count
        );
        for p in &report.pseudo_codewords {
            let _ = writeln!(out, "  {}", exponent_list(p));
        }
        return Ok(ExitCode::SUCCESS);
    }

    // no query: print the inequality system itself
    #[derive(Serialize)]
    struct SystemReport {
        dimension: usize,
        inequalities: Vec<String>,
    }
    let report = SystemReport {
        dimension: system.dimension(),
        inequalities: system
            .inequalities()
            .iter()
            .map(ToString::to_string)
            .collect(),
    };
    if json {
        return print_json(&report, out);
    }
    let _ = writeln!(out, "fundamental cone of a {}-bit code:", report.dimension);
    for ineq in &report.inequalities {
        let _ = writeln!(out, "  {ineq}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_covers(
    h: &ParityCheckMatrix,
    cover_degree: usize,
    samples: u64,
    seed: u64,
    spec_path: Option<&str>,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    const LIST_CAP: usize = 64;

    if spec_path.is_none() && cover_degree == 0 {
        return Err("cover degree must be at least 1".into());
    }

    #[derive(Serialize)]
    struct CoverReport {
        spec: CoverSpec,
        lifted_dense: String,
        lifted_rank: usize,
        codewords_checked: usize,
        enumerated: bool,
        all_in_cone: bool,
        pseudo_codewords: Vec<PseudoPart>,
    }
    #[derive(Serialize)]
    struct PseudoPart {
        codeword: Vec<u8>,
        omega: Vec<String>,
        unscaled: Vec<u32>,
        in_cone: bool,
    }

    let system = cone_system(h);
    let mut reports = Vec::new();
    let specs: Vec<CoverSpec> = if let Some(path) = spec_path {
        let text = fs::read_to_string(path)?;
        vec![serde_json::from_str(&text)?]
    } else {
        (0..samples)
            .map(|s| random_cover_spec(h, cover_degree, seed.wrapping_add(s)))
            .collect()
    };

    for spec in specs {
        let lifted = build_cover(h, &spec)?;
        let (words, enumerated) = match enumerate_codewords(&lifted) {
            Ok(words) => (words, true),
            Err(_) => {
                use rand_chacha::rand_core::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                (sample_codewords(&lifted, 128, &mut rng), false)
            }
        };
        let mut pseudo_parts = Vec::new();
        let mut all_in_cone = true;
        for word in &words {
            let pc = pseudo_codeword(word);
            let in_cone = system.contains(&pc.omega())?;
            all_in_cone &= in_cone;
            if pseudo_parts.len() < LIST_CAP {
                pseudo_parts.push(PseudoPart {
                    codeword: word.bits().to_vec(),
                    omega: pc.omega().iter().map(ToString::to_string).collect(),
                    unscaled: pc.unscaled().to_vec(),
                    in_cone,
                });
            }
        }
        reports.push(CoverReport {
            lifted_dense: lifted.lifted().serialize_dense(),
            lifted_rank: lifted.lifted().rank(),
            codewords_checked: words.len(),
            enumerated,
            all_in_cone,
            pseudo_codewords: pseudo_parts,
            spec,
        });
    }

    if json {
        return print_json(&reports, out);
    }
    for (idx, report) in reports.iter().enumerate() {
        let _ = writeln!(out, "cover {} (degree {}):", idx + 1, report.spec.degree());
        out.push_str(&indent(&report.lifted_dense, "  "));
        let _ = writeln!(out, "  lifted rank: {}", report.lifted_rank);
        let _ = writeln!(
            out,
            "  codewords checked: {} ({})",
            report.codewords_checked,
            if report.enumerated {
                "enumerated"
            } else {
                "sampled"
            }
        );
        for part in &report.pseudo_codewords {
            let _ = writeln!(
                out,
                "  omega = ({}) unscaled = {} in cone: {}",
                part.omega.join(", "),
                exponent_list(&part.unscaled),
                if part.in_cone { "yes" } else { "no" }
            );
        }
        if report.codewords_checked > report.pseudo_codewords.len() {
            let _ = writeln!(
                out,
                "  ... {} more codewords checked",
                report.codewords_checked - report.pseudo_codewords.len()
            );
        }
        let _ = writeln!(
            out,
            "  cone membership: {}",
            if report.all_in_cone {
                "all verified"
            } else {
                "VIOLATION FOUND"
            }
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn indent(text: &str, prefix: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let _ = writeln!(out, "{prefix}{line}");
    }
    out
}

fn cmd_verify(
    h: &ParityCheckMatrix,
    cli: &Cli,
    max_degree: Option<u32>,
    json: bool,
    out: &mut String,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let n = normal_graph(h, cli)?;
    let bound = max_degree.unwrap_or_else(|| default_degree(h));
    let series = zeta_series(&zeta_inverse(&n), bound)?;
    let system = cone_system(h);
    let newton = check_newton_equivalence(&system, h, &series)?;

    let support: BTreeSet<Vec<u32>> = support_exponents(&series)
        .into_iter()
        .map(|e| e.0)
        .collect();
    let realizable: BTreeSet<Vec<u32>> = realizable_usage_vectors(&n, bound)
        .into_iter()
        .map(|e| e.0)
        .collect();
    let support_vs_cycles_ok = support == realizable;
    let pass = newton.pass() && support_vs_cycles_ok;

    #[derive(Serialize)]
    struct VerifyReport {
        degree_bound: u32,
        support_count: usize,
        lattice_count: usize,
        realizable_count: usize,
        missing_from_support: Vec<Vec<u32>>,
        outside_cone: Vec<Vec<u32>>,
        support_vs_cycles_ok: bool,
        pass: bool,
    }
    let report = VerifyReport {
        degree_bound: newton.degree_bound,
        support_count: newton.support_count,
        lattice_count: newton.lattice_count,
        realizable_count: realizable.len(),
        missing_from_support: newton.missing_from_support.clone(),
        outside_cone: newton.outside_cone.clone(),
        support_vs_cycles_ok,
        pass,
    };
    if json {
        print_json(&report, out)?;
    } else {
        let _ = writeln!(out, "degree bound: {}", report.degree_bound);
        let _ = writeln!(out, "zeta support exponents: {}", report.support_count);
        let _ = writeln!(
            out,
            "cone lattice points (even parity): {}",
            report.lattice_count
        );
        let _ = writeln!(out, "cycle-realizable vectors: {}", report.realizable_count);
        for p in &report.missing_from_support {
            let _ = writeln!(
                out,
                "  lattice point missing from support: {}",
                exponent_list(p)
            );
        }
        for p in &report.outside_cone {
            let _ = writeln!(
                out,
                "  support exponent outside cone/parity: {}",
                exponent_list(p)
            );
        }
        if !support_vs_cycles_ok {
            for p in support.symmetric_difference(&realizable) {
                let _ = writeln!(out, "  support/cycle mismatch: {}", exponent_list(p));
            }
        }
        let _ = writeln!(
            out,
            "three-way equivalence: {}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

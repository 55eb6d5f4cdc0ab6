//! `avoidstat`: pattern totals over 132-avoiding permutations from the
//! command line.
//!
//! Exit status: 0 when everything ran and every check held, 1 when a
//! verification found a counterexample (printed), 2 on usage errors.

mod output;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;

use avoidstat::equiv::{self, default_range, explain_class, Mechanisms};
use avoidstat::genfunc;
use avoidstat::{
    catalan, classify_patterns, enumerate_avoiders, total_occurrences, verify_bijection, ColoredTree, Error,
    Explanation, GeneralBijection, Guard, PatternPair, Permutation, SeriesName,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{csv_cell, pretty, Format, Table};

/// Brute-force totals above this length need `--force`.
const MAX_TOTAL_N: usize = 14;
/// Series orders above this need `--force`.
const MAX_ORDER: usize = 2000;

#[derive(Parser, Debug)]
#[command(
    name = "avoidstat",
    version,
    about = "Pattern-occurrence totals over 132-avoiding permutations",
    long_about = "Pattern-occurrence totals over 132-avoiding permutations, plane-tree bijections \
                  and exact generating functions.\n\n\
                  Permutations are written as digits (\"2314\", length <= 9) or separated by \
                  spaces or commas (\"3 1 2 4\", \"10,1,2,...\"). Ranges of n are `a..b` (inclusive) \
                  or a single value. JSON output writes every number as a decimal string.\n\n\
                  Exit status: 0 ok, 1 a verification found a counterexample, 2 usage error."
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Worker threads for totals, signatures and searches (default: all cores).
    #[arg(long, global = true, env = "AVOIDSTAT_THREADS")]
    threads: Option<usize>,
    /// Lift the default size limits.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Catalan numbers c_n.
    Catalan {
        #[arg(long, default_value = "0..12")]
        n: NRange,
    },
    /// List the permutations of length n avoiding a pattern, lexicographically.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "132")]
        avoid: Permutation,
        /// Stop after this many permutations.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Count copies of q in a permutation p.
    Count {
        #[arg(long)]
        p: Permutation,
        #[arg(long)]
        q: Permutation,
        /// Also list the copies as 1-based positions.
        #[arg(long)]
        list: bool,
    },
    /// Total copies of q over all avoiders of length n.
    Total {
        #[arg(long)]
        q: Permutation,
        #[arg(long)]
        n: NRange,
        #[arg(long, default_value = "132")]
        avoid: Permutation,
    },
    /// Totals of q over a range of n (default h..h+4).
    Signature {
        #[arg(long)]
        q: Permutation,
        #[arg(long)]
        n: Option<NRange>,
        #[arg(long, default_value = "132")]
        avoid: Permutation,
    },
    /// Check that 231, 312 and 213 have equal totals for every n up to n-max.
    VerifyTriple {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Check equal totals for (q ⊖ t) ⊕ i_u and (q ⊕ i_u) ⊖ t.
    VerifyGeneral {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "1..10")]
        n: NRange,
        /// Also run the exhaustive bijection check at each n.
        #[arg(long)]
        bijection: bool,
    },
    /// Run the tree bijection: verify it exhaustively, or map one colored tree.
    ///
    /// Colored trees are written `TREE;BLACK;k,m,u` where TREE uses
    /// `.` for an empty tree and `(L R)` for a node, BLACK lists the 1-based
    /// in-order indices of the black nodes, and k, m, u are the lengths of
    /// q, t and the increasing block.
    Bijection {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "1..8", conflicts_with_all = ["apply", "invert"])]
        n: NRange,
        /// Map an A-side colored tree forward.
        #[arg(long, conflicts_with = "invert")]
        apply: Option<String>,
        /// Map a B-side colored tree back.
        #[arg(long)]
        invert: Option<String>,
    },
    /// Coefficients of a generating function: C, D, H, Z, A or B.
    Series {
        #[arg(long)]
        which: SeriesName,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
    /// The closed form for total copies of 213 (n >= 3).
    ClosedA {
        #[arg(long)]
        n: NRange,
    },
    /// Group all patterns of length h by their totals and explain each class.
    Search {
        #[arg(long)]
        h: usize,
        /// Range of n (default h..h+4).
        #[arg(long)]
        n: Option<NRange>,
    },
    /// Check that two patterns have equal totals and name the reason.
    Explain {
        q: Permutation,
        q2: Permutation,
        /// Range of n (default h..h+4).
        #[arg(long)]
        n: Option<NRange>,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, default_value = "1")]
    q: Permutation,
    #[arg(long, default_value = "1")]
    t: Permutation,
    #[arg(long, default_value_t = 1)]
    u: usize,
}

impl PairArgs {
    fn pair(&self) -> Result<PatternPair, Error> {
        PatternPair::new(self.q.clone(), self.t.clone(), self.u)
    }
}

/// Inclusive range `a..b`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl NRange {
    fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }

    fn is_single(self) -> bool {
        self.lo == self.hi
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(NRange { lo, hi })
    }
}

/// A finished run: what to print and whether every check held.
struct Outcome {
    text: String,
    verified: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, verified: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let run = || run(&cli);
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => run(),
    };
    match result {
        Ok(outcome) => {
            let mut out = io::stdout().lock();
            if let Err(e) = out.write_all(outcome.text.as_bytes()) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if outcome.verified { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn guard(cli: &Cli) -> Guard {
    Guard { allow_large: cli.force }
}

fn check_total_n(cli: &Cli, n: usize) -> Result<(), Error> {
    if n > MAX_TOTAL_N && !cli.force {
        return Err(Error::GuardExceeded(format!("n = {n} exceeds {MAX_TOTAL_N}; pass --force to run anyway")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let fmt = cli.format;
    match &cli.command {
        Command::Catalan { n } => {
            let mut t = Table::new(["n", "catalan"]);
            for i in n.iter() {
                t.push([i.to_string(), catalan(i as u64).to_string()]);
            }
            Ok(Outcome::ok(render_values(&t, fmt, n.is_single())))
        }
        Command::Enumerate { n, avoid, limit } => enumerate(*n, avoid, *limit, fmt),
        Command::Count { p, q, list } => Ok(Outcome::ok(count(p, q, *list, fmt))),
        Command::Total { q, n, avoid } => {
            check_total_n(cli, n.hi)?;
            let mut t = Table::new(["n", "total"]);
            for i in n.iter() {
                t.push([i.to_string(), total_occurrences(i, q, avoid)?.to_string()]);
            }
            Ok(Outcome::ok(render_values(&t, fmt, n.is_single())))
        }
        Command::Signature { q, n, avoid } => {
            let n = n.unwrap_or_else(|| default_nrange(q.len()));
            check_total_n(cli, n.hi)?;
            let sig = avoidstat::Signature::compute_avoiding(q, n.lo, n.hi, avoid)?;
            let values: Vec<String> = sig.values.iter().map(|v| v.to_string()).collect();
            let text = match fmt {
                Format::Json => pretty(&json!({
                    "q": q.to_string(),
                    "avoid": avoid.to_string(),
                    "n_min": n.lo.to_string(),
                    "n_max": n.hi.to_string(),
                    "values": values,
                })),
                Format::Csv => format!("{}\n{}\n", n.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","), values.join(",")),
                Format::Table => format!("{q} n={}..{}: {}\n", n.lo, n.hi, values.join(" ")),
            };
            Ok(Outcome::ok(text))
        }
        Command::VerifyTriple { n_max } => verify_triple(cli, *n_max),
        Command::VerifyGeneral { pair, n, bijection } => verify_general(cli, &pair.pair()?, *n, *bijection),
        Command::Bijection { pair, n, apply, invert } => {
            let pair = pair.pair()?;
            match (apply, invert) {
                (Some(s), _) => map_one(&pair, s, true, fmt),
                (_, Some(s)) => map_one(&pair, s, false, fmt),
                _ => bijection_report(cli, &pair, *n),
            }
        }
        Command::Series { which, order } => {
            if *order > MAX_ORDER && !cli.force {
                return Err(Error::GuardExceeded(format!("order {order} exceeds {MAX_ORDER}; pass --force")));
            }
            let coeffs = genfunc::coefficients(*which, *order)?;
            let text = match fmt {
                Format::Json => pretty(&json!({
                    "series": which.to_string(),
                    "order": order.to_string(),
                    "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })),
                _ => {
                    let mut t = Table::new(["n", "value"]);
                    for (i, c) in coeffs.iter().enumerate() {
                        t.push([i.to_string(), c.to_string()]);
                    }
                    t.render(fmt)
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::ClosedA { n } => {
            let mut t = Table::new(["n", "a_n"]);
            for i in n.iter() {
                t.push([i.to_string(), genfunc::a_closed(i as u64)?.to_string()]);
            }
            Ok(Outcome::ok(render_values(&t, fmt, n.is_single())))
        }
        Command::Search { h, n } => search(cli, *h, n.unwrap_or_else(|| default_nrange(*h))),
        Command::Explain { q, q2, n } => explain(cli, q, q2, n.unwrap_or_else(|| default_nrange(q.len()))),
    }
}

fn default_nrange(h: usize) -> NRange {
    let (lo, hi) = default_range(h);
    NRange { lo, hi }
}

/// A one-row table prints as its bare last column in table mode.
fn render_values(t: &Table, fmt: Format, single: bool) -> String {
    if single && fmt == Format::Table {
        format!("{}\n", t.rows[0].last().expect("non-empty row"))
    } else {
        t.render(fmt)
    }
}

fn enumerate(n: usize, avoid: &Permutation, limit: Option<usize>, fmt: Format) -> Result<Outcome, Error> {
    let stream = enumerate_avoiders(n, avoid)?.take(limit.unwrap_or(usize::MAX));
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let write = || -> io::Result<()> {
        match fmt {
            Format::Json => {
                writeln!(out, "[")?;
                let mut first = true;
                for p in stream {
                    if !first {
                        writeln!(out, ",")?;
                    }
                    first = false;
                    write!(out, "  \"{p}\"")?;
                }
                if !first {
                    writeln!(out)?;
                }
                writeln!(out, "]")?;
            }
            Format::Csv => {
                writeln!(out, "permutation")?;
                for p in stream {
                    writeln!(out, "{}", csv_cell(&p.to_string()))?;
                }
            }
            Format::Table => {
                for p in stream {
                    writeln!(out, "{p}")?;
                }
            }
        }
        out.flush()
    };
    match write() {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
        Err(e) => return Err(Error::InvalidArgument(format!("write failed: {e}"))),
    }
    Ok(Outcome::ok(String::new()))
}

fn count(p: &Permutation, q: &Permutation, list: bool, fmt: Format) -> String {
    let n = p.count_occurrences(q);
    let occs: Vec<String> = if list { p.occurrences(q).map(|o| o.to_string()).collect() } else { Vec::new() };
    match fmt {
        Format::Json => {
            let mut v = json!({ "p": p.to_string(), "q": q.to_string(), "count": n.to_string() });
            if list {
                v["occurrences"] = Value::from(occs);
            }
            pretty(&v)
        }
        Format::Csv => {
            if list {
                let mut s = String::from("occurrence\n");
                for o in occs {
                    s.push_str(&csv_cell(&o));
                    s.push('\n');
                }
                s
            } else {
                format!("count\n{n}\n")
            }
        }
        Format::Table => {
            let mut s = format!("{n}\n");
            for o in occs {
                s.push_str(&o);
                s.push('\n');
            }
            s
        }
    }
}

fn verify_triple(cli: &Cli, n_max: usize) -> Result<Outcome, Error> {
    check_total_n(cli, n_max)?;
    let pats: Vec<Permutation> = ["231", "312", "213"].iter().map(|s| s.parse().expect("literal")).collect();
    let mut t = Table::new(["n", "S(231)", "S(312)", "S(213)", "equal"]);
    let mut verified = true;
    let mut witness = None;
    for n in 1..=n_max {
        let vals = pats.iter().map(|q| total_occurrences(n, q, &avoidstat::avoiders::p132())).collect::<Result<Vec<_>, _>>()?;
        let equal = vals.windows(2).all(|w| w[0] == w[1]);
        if !equal && witness.is_none() {
            witness = Some(format!("counterexample at n = {n}: {}, {}, {}", vals[0], vals[1], vals[2]));
        }
        verified &= equal;
        t.push([n.to_string(), vals[0].to_string(), vals[1].to_string(), vals[2].to_string(), equal.to_string()]);
    }
    Ok(Outcome { text: with_witness(t.render(cli.format), witness, cli.format), verified })
}

fn with_witness(mut text: String, witness: Option<String>, fmt: Format) -> String {
    if let Some(w) = witness {
        if fmt == Format::Table {
            text.push_str(&w);
            text.push('\n');
        } else {
            eprintln!("{w}");
        }
    }
    text
}

fn verify_general(cli: &Cli, pair: &PatternPair, n: NRange, bijection: bool) -> Result<Outcome, Error> {
    check_total_n(cli, n.hi)?;
    let (a, b) = (pair.a_side(), pair.b_side());
    let mut header = vec!["n".to_string(), format!("S({a})"), format!("S({b})"), "equal".to_string()];
    if bijection {
        header.push("bijection".to_string());
    }
    let mut t = Table::new(header);
    let mut verified = true;
    let mut witness = None;
    for i in n.iter() {
        let sa = total_occurrences(i, &a, &avoidstat::avoiders::p132())?;
        let sb = total_occurrences(i, &b, &avoidstat::avoiders::p132())?;
        let equal = sa == sb;
        let mut row = vec![i.to_string(), sa.to_string(), sb.to_string(), equal.to_string()];
        if !equal && witness.is_none() {
            witness = Some(format!("counterexample at n = {i}: S({a}) = {sa}, S({b}) = {sb}"));
        }
        verified &= equal;
        if bijection {
            let report = verify_bijection(i, pair, guard(cli))?;
            if !report.passed() && witness.is_none() {
                witness = Some(format!("bijection fails at n = {i}: {}", report.failures.join("; ")));
            }
            verified &= report.passed();
            row.push(if report.passed() { "ok" } else { "FAILED" }.to_string());
        }
        t.push(row);
    }
    Ok(Outcome { text: with_witness(t.render(cli.format), witness, cli.format), verified })
}

fn bijection_report(cli: &Cli, pair: &PatternPair, n: NRange) -> Result<Outcome, Error> {
    let mut reports = Vec::new();
    for i in n.iter() {
        reports.push(verify_bijection(i, pair, guard(cli))?);
    }
    let verified = reports.iter().all(|r| r.passed());
    let text = match cli.format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n.to_string(),
                        "a_pattern": r.a_pattern.to_string(),
                        "b_pattern": r.b_pattern.to_string(),
                        "a_count": r.a_count.to_string(),
                        "b_count": r.b_count.to_string(),
                        "a_expected": r.a_expected.to_string(),
                        "b_expected": r.b_expected.to_string(),
                        "case1": r.case1.to_string(),
                        "case2": r.case2.to_string(),
                        "image_in_b": r.image_in_b,
                        "injective": r.injective,
                        "surjective": r.surjective,
                        "round_trip_a": r.round_trip_a,
                        "round_trip_b": r.round_trip_b,
                        "left_subtrees_preserved": r.left_subtrees_preserved,
                        "apex_property": r.apex_property,
                        "case1_left_clause": r.case1_left_clause,
                        "agrees_with_f": r.agrees_with_f,
                        "passed": r.passed(),
                        "failures": r.failures,
                    })
                })
                .collect();
            pretty(&json!({
                "q": pair.q().to_string(),
                "t": pair.t().to_string(),
                "u": pair.u().to_string(),
                "reports": rows,
            }))
        }
        fmt => {
            let mut t = Table::new(["n", "|A_n|", "|B_n|", "case1", "case2", "bijective", "round_trips", "left_subtrees", "verdict"]);
            for r in &reports {
                t.push([
                    r.n.to_string(),
                    r.a_count.to_string(),
                    r.b_count.to_string(),
                    r.case1.to_string(),
                    r.case2.to_string(),
                    (r.image_in_b && r.injective && r.surjective).to_string(),
                    (r.round_trip_a && r.round_trip_b).to_string(),
                    r.left_subtrees_preserved.to_string(),
                    if r.passed() { "ok" } else { "FAILED" }.to_string(),
                ]);
            }
            let mut text = String::new();
            if fmt == Format::Table {
                let p = &reports.first().map(|r| (r.a_pattern.to_string(), r.b_pattern.to_string()));
                if let Some((a, b)) = p {
                    text.push_str(&format!("{a} -> {b}\n"));
                }
            }
            text.push_str(&t.render(fmt));
            for r in reports.iter().filter(|r| !r.passed()) {
                for f in &r.failures {
                    if fmt == Format::Table {
                        text.push_str(&format!("n = {}: {f}\n", r.n));
                    } else {
                        eprintln!("n = {}: {f}", r.n);
                    }
                }
            }
            text
        }
    };
    Ok(Outcome { text, verified })
}

fn map_one(pair: &PatternPair, s: &str, forward: bool, fmt: Format) -> Result<Outcome, Error> {
    let ct: ColoredTree = s.parse()?;
    let bij = GeneralBijection::new(pair.clone());
    let (image, case) = if forward {
        let case = match bij.classify(&ct)? {
            avoidstat::CaseTag::Case1 => "case1".to_string(),
            avoidstat::CaseTag::Case2 { pivot } => format!("case2 pivot={}", pivot + 1),
        };
        (bij.forward(&ct)?, Some(case))
    } else {
        (bij.inverse(&ct)?, None)
    };
    let text = match fmt {
        Format::Json => {
            let mut v = json!({
                "input": ct.to_string(),
                "input_permutation": ct.permutation().to_string(),
                "image": image.to_string(),
                "image_permutation": image.permutation().to_string(),
            });
            if let Some(c) = &case {
                v["case"] = Value::from(c.clone());
            }
            pretty(&v)
        }
        Format::Csv => format!("image,permutation\n{},{}\n", csv_cell(&image.to_string()), csv_cell(&image.permutation().to_string())),
        Format::Table => {
            let mut s = format!("{image}\n{}\n", image.permutation());
            if let Some(c) = case {
                s.push_str(&c);
                s.push('\n');
            }
            s
        }
    };
    Ok(Outcome::ok(text))
}

fn explanation_json(e: &Explanation) -> Value {
    let mut v = json!({ "tag": e.tag(), "detail": e.to_string() });
    match e {
        Explanation::TheoremGeneral { witness } | Explanation::Corollary { witness, .. } => {
            v["witness"] = json!({
                "q": witness.q().to_string(),
                "t": witness.t().to_string(),
                "u": witness.u().to_string(),
            });
            if let Explanation::Corollary { v: a, v2: b, .. } = e {
                v["v"] = json!([a.to_string(), b.to_string()]);
            }
        }
        Explanation::Chained(steps) => {
            v["steps"] = steps
                .iter()
                .map(|s| json!({ "from": s.from.to_string(), "to": s.to.to_string(), "reason": explanation_json(&s.reason) }))
                .collect();
        }
        _ => {}
    }
    v
}

fn search(cli: &Cli, h: usize, n: NRange) -> Result<Outcome, Error> {
    let classes = classify_patterns(h, n.lo, n.hi, guard(cli))?;
    let mech = Mechanisms::new(h)?;
    let text = match cli.format {
        Format::Json => {
            let cls: Vec<Value> = classes
                .iter()
                .map(|c| {
                    json!({
                        "members": c.members.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "signature": c.signature.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "degenerate": c.is_degenerate(),
                        "explanations": explain_class(c, &mech)
                            .iter()
                            .map(|e| json!({ "q": e.q.to_string(), "q2": e.q2.to_string(), "explanation": explanation_json(&e.explanation) }))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({
                "h": h.to_string(),
                "n_min": n.lo.to_string(),
                "n_max": n.hi.to_string(),
                "note": "empirical, range-limited",
                "classes": cls,
            }))
        }
        fmt => {
            let mut t = Table::new(["class", "members", "signature", "explanations"]);
            for (i, c) in classes.iter().enumerate() {
                let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
                let sig: Vec<String> = c.signature.values.iter().map(|v| v.to_string()).collect();
                let expl: Vec<String> = explain_class(c, &mech)
                    .iter()
                    .map(|e| format!("{}~{}: {}", e.q, e.q2, e.explanation.tag()))
                    .collect();
                let expl = if c.is_degenerate() { "degenerate".to_string() } else { expl.join(" ") };
                t.push([(i + 1).to_string(), members.join(" "), sig.join(" "), expl]);
            }
            let mut text = String::new();
            if fmt == Format::Table {
                text.push_str(&format!("h = {h}, n = {}..{} (empirical, range-limited)\n", n.lo, n.hi));
            }
            text.push_str(&t.render(fmt));
            text
        }
    };
    Ok(Outcome::ok(text))
}

fn explain(cli: &Cli, q: &Permutation, q2: &Permutation, n: NRange) -> Result<Outcome, Error> {
    match equiv::explain_pair(q, q2, n.lo, n.hi, guard(cli)) {
        Ok(e) => {
            let text = match cli.format {
                Format::Json => pretty(&json!({
                    "q": q.to_string(),
                    "q2": q2.to_string(),
                    "n_min": n.lo.to_string(),
                    "n_max": n.hi.to_string(),
                    "explanation": explanation_json(&e.explanation),
                })),
                Format::Csv => format!("q,q2,tag,detail\n{q},{q2},{},{}\n", e.explanation.tag(), csv_cell(&e.explanation.to_string())),
                Format::Table => format!("{q} ~ {q2} on n = {}..{}: {}\n", n.lo, n.hi, e.explanation),
            };
            Ok(Outcome::ok(text))
        }
        Err(Error::NotEquivalent(..)) => {
            let p132 = avoidstat::avoiders::p132();
            let mut witness = String::new();
            for i in n.iter() {
                let (a, b) = (total_occurrences(i, q, &p132)?, total_occurrences(i, q2, &p132)?);
                if a != b {
                    witness = format!("n = {i}: S({q}) = {a}, S({q2}) = {b}");
                    break;
                }
            }
            let text = match cli.format {
                Format::Json => pretty(&json!({ "q": q.to_string(), "q2": q2.to_string(), "equivalent": false, "witness": witness })),
                _ => format!("not equivalent: {witness}\n"),
            };
            Ok(Outcome { text, verified: false })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3..5".parse::<NRange>().unwrap(), NRange { lo: 3, hi: 5 });
        assert_eq!("4".parse::<NRange>().unwrap(), NRange { lo: 4, hi: 4 });
        assert_eq!("2..=3".parse::<NRange>().unwrap(), NRange { lo: 2, hi: 3 });
        assert!("5..3".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn cli_definition() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn default_signature_range() {
        assert_eq!(default_nrange(3), NRange { lo: 3, hi: 7 });
    }
}

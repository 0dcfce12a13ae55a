use std::io::{self, BufRead, IsTerminal, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use serre_genes::gene::{dominant_letters, is_degenerate, is_viable, sample_triple_seeded, Gene, Letter};
use serre_genes::kisin::{decompose, presentation_of_fragment, presentation_of_gene, reduce, Component, KisinPresentation};
use serre_genes::serre::{common_weights_fast, weights_of_rep, weights_of_type, SerreWeight};
use serre_genes::triple::CoherentTriple;
use serre_genes::weights::{count_weights, gene_weights, stream_weights, CombinatorialWeight};
use serre_genes::Error;

mod input;

use input::{gene_from, parse_gene, parse_kisin_input, KisinInput, TripleArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Exhausted(String),
    Unsupported(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Exhausted(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Exhausted(m) | CliError::Unsupported(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Failure => CliError::Exhausted(e.to_string()),
            Error::UnsupportedPrime(_) => CliError::Unsupported(e.to_string()),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Genes, combinatorial weights and Serre weights of pairs (t, rhobar)
#[derive(Parser, Debug)]
#[command(name = "genes", version, about)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit text (the default)
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render the gene of a triple
    Gene {
        /// Gene as "top/bottom" instead of a triple
        word: Option<String>,
        #[command(flatten)]
        triple: TripleArgs,
        /// Mark the dominant letter of each column
        #[arg(long)]
        dominance: bool,
    },
    /// List or count the combinatorial weights of a gene
    Weights {
        word: Option<String>,
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        count_only: bool,
        /// Stream only the first N weights
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Serre weights of a representation, a type, or both
    Serre {
        #[arg(value_enum)]
        which: SerreSet,
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        count_only: bool,
    },
    /// Draw a uniform triple with the given gene
    Sample {
        word: String,
        #[arg(long, default_value_t = 5)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attempts allowed after the first failure
        #[arg(long, default_value_t = 64)]
        retries: usize,
    },
    /// Kisin presentation of a gene or a fragment
    Kisin {
        word: Option<String>,
        #[command(flatten)]
        triple: TripleArgs,
    },
    /// Process a JSONL file of requests ("-" for stdin)
    Batch { path: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SerreSet {
    Rhobar,
    Type,
    Common,
}

/// JSON integer, as a string beyond 2^53.
fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) if v <= 1 << 53 => json!(v),
        _ => json!(n.to_string()),
    }
}

fn letters(ls: &[Letter]) -> Vec<String> {
    ls.iter().map(|l| l.to_string()).collect()
}

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal()
}

fn paint(text: &str, letter: Letter) -> String {
    match letter {
        Letter::A => format!("\x1b[34m{text}\x1b[0m"),
        Letter::B => format!("\x1b[31m{text}\x1b[0m"),
        _ => text.to_string(),
    }
}

fn gene_json(g: &Gene, dominance: bool) -> Value {
    let mut v = json!({
        "f": g.f(),
        "top": letters(g.top()),
        "bottom": letters(g.bottom()),
        "viable": is_viable(g),
        "degenerate": is_degenerate(g),
    });
    if dominance {
        v["dominance"] = match dominant_letters(g) {
            Ok(d) => json!(letters(d.letters())),
            Err(_) => Value::Null,
        };
    }
    v
}

fn gene_text(g: &Gene, dominance: bool) -> String {
    let row = |ls: &[Letter]| letters(ls).join(",");
    let mut out = format!("{}\n{}", row(g.top()), row(g.bottom()));
    if dominance {
        let line = match dominant_letters(g) {
            Ok(d) if color_enabled() => d.letters().iter().map(|&l| paint(&l.to_string(), l)).collect::<Vec<_>>().join(","),
            Ok(d) => row(d.letters()),
            Err(e) => format!("none ({e})"),
        };
        out.push_str(&format!("\ndominance: {line}"));
    }
    out
}

fn weight_json(w: &CombinatorialWeight) -> Value {
    json!(w.bits())
}

fn serre_json(w: &SerreWeight) -> Value {
    json!({"r": w.r(), "s": big(w.s())})
}

fn triple_json(t: &CoherentTriple) -> Value {
    json!({
        "p": t.p(),
        "f": t.f(),
        "h": big(&t.h().value()),
        "gamma": big(&t.gamma().value()),
        "gamma_prime": big(&t.gamma_prime().value()),
    })
}

fn presentation_json(pr: &KisinPresentation) -> Value {
    let constants: Vec<Value> = pr
        .constants
        .iter()
        .map(|c| match c {
            serre_genes::kisin::Constant::Free => Value::Null,
            serre_genes::kisin::Constant::ZeroOne => json!("[0:1]"),
            serre_genes::kisin::Constant::OneZero => json!("[1:0]"),
        })
        .collect();
    let equations: Vec<Value> = pr.equations.iter().map(|e| json!({"i": e.i, "lambda": e.lambda, "mu": e.mu})).collect();
    json!({"n": pr.n, "constants": constants, "equations": equations, "text": pr.render()})
}

/// "{[0:1]}" for a one-point factor, "GR(F)" otherwise.
fn factor_note(pr: &KisinPresentation, reduced: &serre_genes::gene::Fragment) -> String {
    let pts = pr.points(3);
    if pts.len() == 1 {
        let one: Vec<&str> = pts[0].iter().map(|&x| if x == 0 { "[0:1]" } else { "[1:0]" }).collect();
        return format!("{{{}}}", one.join(" × "));
    }
    format!("GR({reduced})")
}

fn component_json(c: &Component) -> Value {
    json!({
        "start": c.start,
        "len": c.len,
        "case": c.case.map(|k| format!("{k:?}")),
        "presentation": presentation_json(&c.presentation),
    })
}

fn kisin_of_gene(g: &Gene) -> Result<(Value, String), CliError> {
    let pr = presentation_of_gene(g)?;
    let comps = decompose(g)?;
    let frs = serre_genes::gene::fragments(g)?;
    let mut notes = Vec::new();
    let mut k = 0;
    for fr in &frs {
        let r = reduce(fr);
        for _ in 0..r.n {
            notes.push(factor_note(&comps[k].presentation, &r.reduced));
            k += 1;
        }
        notes.push(factor_note(&comps[k].presentation, &r.reduced));
        k += 1;
    }
    let variety = notes.join(" × ");
    let mut v = presentation_json(&pr);
    v["components"] = comps.iter().map(component_json).collect();
    v["variety"] = json!(variety);
    let text = format!("{}\nvariety: {variety}", pr.render());
    Ok((v, text))
}

fn kisin_of_fragment(fr: &serre_genes::gene::Fragment) -> (Value, String) {
    let pr = presentation_of_fragment(fr);
    let r = reduce(fr);
    let point = if r.rows_swapped { "{[1:0]}" } else { "{[0:1]}" };
    let mut notes = vec![point.to_string(); r.n];
    let rest = r.n..fr.len();
    let tail = pr.slice(rest.start, rest.len(), pr.constants[0]);
    notes.push(factor_note(&tail, &r.reduced));
    let variety = notes.join(" × ");
    let mut v = presentation_json(&pr);
    v["variety"] = json!(variety);
    v["reduced"] = json!({"n": r.n, "fragment": r.reduced.to_string(), "case": format!("{:?}", r.case)});
    (v, format!("{}\nvariety: {variety}", pr.render()))
}

struct Out {
    json: bool,
    lines: Vec<String>,
}

impl Out {
    fn emit(&mut self, v: Value, text: impl Into<String>) {
        if self.json {
            self.lines.push(v.to_string());
        } else {
            let t = text.into();
            if !t.is_empty() {
                self.lines.push(t);
            }
        }
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<(), CliError> {
    match cli.command {
        Command::Gene { word, triple, dominance } => {
            let g = gene_from(word.as_deref(), &triple)?;
            out.emit(gene_json(&g, dominance), gene_text(&g, dominance));
        }
        Command::Weights { word, triple, count_only, limit } => {
            let g = gene_from(word.as_deref(), &triple)?;
            if count_only {
                let n = count_weights(&g);
                out.emit(json!({"count": big(&n)}), n.to_string());
            } else {
                let ws: Vec<CombinatorialWeight> = match limit {
                    Some(k) => stream_weights(&g).take(k).collect(),
                    None => gene_weights(&g),
                };
                let text = ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("\n");
                out.emit(json!({"count": ws.len(), "weights": ws.iter().map(weight_json).collect::<Vec<_>>()}), text);
            }
        }
        Command::Serre { which, triple, count_only } => {
            let (p, f) = triple.pf()?;
            if count_only {
                if let SerreSet::Common = which {
                    let t = triple.triple()?;
                    let n = count_weights(&serre_genes::gene::gene_of_triple(&t));
                    out.emit(json!({"count": big(&n)}), n.to_string());
                    return Ok(());
                }
            }
            let set = match which {
                SerreSet::Rhobar => weights_of_rep(p, f, &triple.h()?)?,
                SerreSet::Type => weights_of_type(p, f, &triple.gamma()?, &triple.gamma_prime()?)?,
                SerreSet::Common => common_weights_fast(&triple.triple()?),
            };
            if count_only {
                out.emit(json!({"count": set.len()}), set.len().to_string());
            } else {
                let text = set.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("\n");
                out.emit(json!({"count": set.len(), "weights": set.iter().map(serre_json).collect::<Vec<_>>()}), text);
            }
        }
        Command::Sample { word, p, seed, retries } => {
            let g = parse_gene(&word)?;
            let t = sample_triple_seeded(&g, p, seed, retries).map_err(|e| match e {
                Error::Failure => CliError::Exhausted(format!("sampler failed {} times", retries + 1)),
                e => e.into(),
            })?;
            let text = format!(
                "p={} f={} h={} gamma={} gamma_prime={}",
                t.p(),
                t.f(),
                t.h().value(),
                t.gamma().value(),
                t.gamma_prime().value()
            );
            out.emit(triple_json(&t), text);
        }
        Command::Kisin { word, triple } => {
            let (v, text) = match word {
                Some(s) if triple.is_empty() => match parse_kisin_input(&s)? {
                    KisinInput::Gene(g) => kisin_of_gene(&g)?,
                    KisinInput::Fragment(fr) => kisin_of_fragment(&fr),
                },
                other => kisin_of_gene(&gene_from(other.as_deref(), &triple)?)?,
            };
            out.emit(v, text);
        }
        Command::Batch { path } => batch(&path)?,
    }
    Ok(())
}

fn batch_record(line: &str) -> Result<Value, String> {
    let rec: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let obj = rec.as_object().ok_or("record is not an object")?;
    let field = |k: &str| obj.get(k).cloned().unwrap_or(Value::Null);
    let small = |k: &str| field(k).as_u64().ok_or_else(|| format!("missing or invalid field {k}"));
    let p = u32::try_from(small("p")?).map_err(|_| "p out of range".to_string())?;
    let f = usize::try_from(small("f")?).map_err(|_| "f out of range".to_string())?;
    let request = field("request");
    let request = request.as_str().ok_or("missing field request")?;
    let t = input::batch_triple(
        p,
        f,
        input::batch_number(&field("h"), "h")?,
        input::batch_number(&field("gamma"), "gamma")?,
        input::batch_number(&field("gamma_prime"), "gamma_prime")?,
    )?;
    let g = serre_genes::gene::gene_of_triple(&t);
    Ok(match request {
        "gene" => gene_json(&g, false),
        "count" => json!({"count": big(&count_weights(&g))}),
        "weights" => json!({"weights": gene_weights(&g).iter().map(weight_json).collect::<Vec<_>>()}),
        "common" => {
            let set = common_weights_fast(&t);
            json!({"count": set.len(), "weights": set.iter().map(serre_json).collect::<Vec<_>>()})
        }
        "kisin" => kisin_of_gene(&g).map_err(|e| e.to_string())?.0,
        other => return Err(format!("unknown request {other:?}")),
    })
}

fn batch(path: &str) -> Result<(), CliError> {
    let reader: Box<dyn BufRead> = if path == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(io::BufReader::new(std::fs::File::open(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?))
    };
    let stdout = io::stdout();
    let mut w = io::BufWriter::new(stdout.lock());
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v = batch_record(&line).unwrap_or_else(|e| json!({"error": e, "line": k + 1}));
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Out { json: cli.json, lines: Vec::new() };
    let result = run(cli, &mut out);
    let mut stdout = io::stdout().lock();
    for l in &out.lines {
        if writeln!(stdout, "{l}").is_err() {
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

use num_bigint::BigUint;
use num_traits::Num;
use serde_json::Value;
use serre_genes::basep::Modulus;
use serre_genes::gene::{gene_of_triple, Fragment, Gene};
use serre_genes::triple::{make_triple, CoherentTriple};
use serre_genes::weights::extremal_fragment;

use crate::CliError;

/// Decimal integer, or hexadecimal with a 0x prefix.
pub fn parse_number(s: &str) -> Result<BigUint, CliError> {
    let s = s.trim().replace('_', "");
    let parsed = match s.strip_prefix("0x") {
        Some(hex) => BigUint::from_str_radix(hex, 16),
        None => BigUint::from_str_radix(&s, 10),
    };
    parsed.map_err(|_| CliError::Usage(format!("not a nonnegative integer: {s:?}")))
}

/// One row of letters separated by commas or spaces.
fn normalize_row(row: &str) -> String {
    row.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(",")
}

fn normalize(word: &str) -> String {
    let s = word.trim().trim_start_matches('[').trim_end_matches(']');
    match s.split_once('/') {
        Some((top, bottom)) => format!("{}/{}", normalize_row(top), normalize_row(bottom)),
        None => s.to_string(),
    }
}

/// The one-fragment gene `FibG<f>` with Fib_{f+2} weights. For even f the
/// extremal fragment ends with AB in the row of its O, which no
/// one-fragment gene allows.
fn fibonacci_gene(f: usize) -> Result<Gene, CliError> {
    if f < 3 || f % 2 == 0 {
        return Err(CliError::Usage(format!("FibG needs odd f >= 3, got {f}")));
    }
    let fr = extremal_fragment(f, false);
    let top: Vec<_> = fr.columns().iter().map(|c| c.0).collect();
    let bottom: Vec<_> = fr.columns().iter().map(|c| c.1).collect();
    Ok(Gene::from_rows(&top, &bottom)?)
}

pub fn parse_gene(word: &str) -> Result<Gene, CliError> {
    let s = normalize(word);
    let lower = s.to_ascii_lowercase();
    if let Some(n) = lower.strip_prefix("fibg").or_else(|| lower.strip_prefix("fib")) {
        let f = n.parse().map_err(|_| CliError::Usage(format!("bad gene name {word:?}")))?;
        return fibonacci_gene(f);
    }
    Ok(s.parse()?)
}

pub fn parse_fragment(word: &str) -> Result<Fragment, CliError> {
    Ok(normalize(word).parse()?)
}

/// Gene or fragment, whichever the text describes.
pub enum KisinInput {
    Gene(Gene),
    Fragment(Fragment),
}

pub fn parse_kisin_input(word: &str) -> Result<KisinInput, CliError> {
    match parse_gene(word) {
        Ok(g) => Ok(KisinInput::Gene(g)),
        Err(gene_err) => parse_fragment(word).map(KisinInput::Fragment).map_err(|_| gene_err),
    }
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct TripleArgs {
    /// Residue characteristic
    #[arg(long)]
    pub p: Option<u32>,
    /// Degree of the unramified extension
    #[arg(long)]
    pub f: Option<usize>,
    /// Exponent of the representation, modulo q^2-1
    #[arg(long)]
    pub h: Option<String>,
    /// First exponent of the type, modulo q-1
    #[arg(long)]
    pub gamma: Option<String>,
    /// Second exponent of the type, modulo q-1
    #[arg(long = "gamma-prime")]
    pub gamma_prime: Option<String>,
}

impl TripleArgs {
    pub fn is_empty(&self) -> bool {
        self.p.is_none() && self.f.is_none() && self.h.is_none() && self.gamma.is_none() && self.gamma_prime.is_none()
    }

    pub fn pf(&self) -> Result<(u32, usize), CliError> {
        match (self.p, self.f) {
            (Some(p), Some(f)) => {
                serre_genes::basep::check_params(p, f)?;
                Ok((p, f))
            }
            _ => Err(CliError::Usage("--p and --f are required".into())),
        }
    }

    fn number(&self, name: &str, v: &Option<String>) -> Result<BigUint, CliError> {
        let s = v.as_ref().ok_or_else(|| CliError::Usage(format!("--{name} is required")))?;
        parse_number(s)
    }

    pub fn h(&self) -> Result<BigUint, CliError> {
        let (p, f) = self.pf()?;
        let h = self.number("h", &self.h)?;
        Ok(note_reduction("h", h, &Modulus::q2m1(p, f)?.value()))
    }

    pub fn gamma(&self) -> Result<BigUint, CliError> {
        let (p, f) = self.pf()?;
        let g = self.number("gamma", &self.gamma)?;
        Ok(note_reduction("gamma", g, &Modulus::qm1(p, f)?.value()))
    }

    pub fn gamma_prime(&self) -> Result<BigUint, CliError> {
        let (p, f) = self.pf()?;
        let g = self.number("gamma-prime", &self.gamma_prime)?;
        Ok(note_reduction("gamma-prime", g, &Modulus::qm1(p, f)?.value()))
    }

    pub fn triple(&self) -> Result<CoherentTriple, CliError> {
        let (p, f) = self.pf()?;
        Ok(make_triple(p, f, &self.h()?, &self.gamma()?, &self.gamma_prime()?)?)
    }
}

fn note_reduction(name: &str, n: BigUint, modulus: &BigUint) -> BigUint {
    if &n < modulus {
        return n;
    }
    let r = &n % modulus;
    eprintln!("note: {name} = {n} reduced modulo {modulus} to {r}");
    r
}

/// A gene from a positional word or, failing that, from triple flags.
pub fn gene_from(word: Option<&str>, t: &TripleArgs) -> Result<Gene, CliError> {
    match word {
        Some(s) => {
            if !t.is_empty() {
                return Err(CliError::Usage("give either a gene or triple flags, not both".into()));
            }
            parse_gene(s)
        }
        None if t.is_empty() => Err(CliError::Usage("a gene or a triple is required".into())),
        None => Ok(gene_of_triple(&t.triple()?)),
    }
}

/// Number field of a batch record: JSON number, decimal string, or array
/// of big-endian base-p digits.
pub enum BatchNumber {
    Value(BigUint),
    Digits(Vec<u32>),
}

pub fn batch_number(v: &Value, name: &str) -> Result<BatchNumber, String> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(|n| BatchNumber::Value(n.into()))
            .ok_or_else(|| format!("{name} must be a nonnegative integer")),
        Value::String(s) => parse_number(s).map(BatchNumber::Value).map_err(|e| e.to_string()),
        Value::Array(items) => items
            .iter()
            .map(|d| d.as_u64().and_then(|d| u32::try_from(d).ok()))
            .collect::<Option<Vec<u32>>>()
            .map(BatchNumber::Digits)
            .ok_or_else(|| format!("{name} digits must be small nonnegative integers")),
        Value::Null => Err(format!("missing field {name}")),
        _ => Err(format!("{name} must be a number, a string or a digit array")),
    }
}

fn batch_value(n: BatchNumber, p: u32) -> Result<BigUint, String> {
    match n {
        BatchNumber::Value(n) => Ok(n),
        BatchNumber::Digits(d) => {
            if let Some(&bad) = d.iter().find(|&&x| x >= p) {
                return Err(format!("digit {bad} out of range for p = {p}"));
            }
            Ok(d.iter().fold(BigUint::default(), |acc, &x| acc * p + x))
        }
    }
}

pub fn batch_triple(p: u32, f: usize, h: BatchNumber, g: BatchNumber, gp: BatchNumber) -> Result<CoherentTriple, String> {
    let (h, g, gp) = (batch_value(h, p)?, batch_value(g, p)?, batch_value(gp, p)?);
    make_triple(p, f, &h, &g, &gp).map_err(|e| e.to_string())
}
